use std::collections::BTreeMap;
use std::ops::Mul;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::rational::{dot, from_f64, Rational};
use crate::lattice::IntVector;

/// Absolute tolerance (scaled by `max(1, |value|)`) for deciding ties on
/// the float evaluation path.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// q(x) = max_α {⟨x, α⟩ + c_α} over a finite set of integer exponents.
///
/// Exponents may have any sign. Duplicate exponents are merged by keeping
/// the larger coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalPolynomial {
    ambient: usize,
    terms: BTreeMap<IntVector, f64>,
}

/// Value of a tropical polynomial at a point, with the exponents of the
/// terms attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalEval<T> {
    pub value: T,
    pub argmax: Vec<IntVector>,
}

impl TropicalPolynomial {
    pub fn new(ambient: usize, terms: impl IntoIterator<Item = (IntVector, f64)>) -> Result<Self> {
        let mut map: BTreeMap<IntVector, f64> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: exp.dim(),
                });
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!("coefficient {c} is not finite")));
            }
            map.entry(exp).and_modify(|old| *old = old.max(c)).or_insert(c);
        }
        if map.is_empty() {
            return Err(Error::InvalidParameter("tropical polynomial needs at least one term".into()));
        }
        Ok(TropicalPolynomial { ambient, terms: map })
    }

    /// Convenience constructor from `(exponent, coefficient)` literals.
    pub fn from_i64(ambient: usize, terms: &[(&[i64], f64)]) -> Result<Self> {
        Self::new(ambient, terms.iter().map(|(e, c)| (IntVector::from_i64(e), *c)))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntVector, f64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn exponents(&self) -> impl Iterator<Item = &IntVector> {
        self.terms.keys()
    }

    /// Value of each term ⟨x, α⟩ + c_α at `x`, in exponent order.
    pub fn term_values(&self, x: &[f64]) -> Vec<f64> {
        self.terms
            .iter()
            .map(|(e, c)| e.0.iter().zip(x).map(|(a, xi)| a.to_f64().unwrap_or(f64::NAN) * xi).sum::<f64>() + c)
            .collect()
    }

    pub fn eval(&self, x: &[f64]) -> Result<TropicalEval<f64>> {
        self.check_dim(x.len())?;
        let vals = self.term_values(x);
        let value = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = TIE_TOLERANCE * value.abs().max(1.0);
        let argmax = self
            .terms
            .keys()
            .zip(&vals)
            .filter(|(_, v)| value - **v <= tol)
            .map(|(e, _)| e.clone())
            .collect();
        Ok(TropicalEval { value, argmax })
    }

    /// Exact evaluation at a rational point, treating each coefficient as
    /// the rational number its float represents exactly.
    pub fn eval_exact(&self, x: &[Rational]) -> Result<TropicalEval<Rational>> {
        self.check_dim(x.len())?;
        let vals: Vec<Rational> = self
            .exact_terms()
            .iter()
            .map(|(e, c)| dot(&e.to_rational(), x) + c)
            .collect();
        let value = vals.iter().max().expect("nonempty").clone();
        let argmax = self
            .terms
            .keys()
            .zip(&vals)
            .filter(|(_, v)| **v == value)
            .map(|(e, _)| e.clone())
            .collect();
        Ok(TropicalEval { value, argmax })
    }

    /// Terms with coefficients converted exactly to rationals.
    pub fn exact_terms(&self) -> Vec<(IntVector, Rational)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), from_f64(*c).expect("coefficients are finite")))
            .collect()
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found,
            });
        }
        Ok(())
    }
}

/// `max_α {⟨x, α⟩ + c_α}` at `x` together with the maximizing exponents.
pub fn eval_tropical(q: &TropicalPolynomial, x: &[f64]) -> Result<TropicalEval<f64>> {
    q.eval(x)
}

/// f(z) = Σ c_α z^α with nonnegative exponents and nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial {
    ambient: usize,
    terms: BTreeMap<IntVector, Complex64>,
}

impl ComplexPolynomial {
    /// Builds a polynomial; repeated exponents are summed and zero
    /// coefficients dropped. Errors on negative exponents or if nothing
    /// remains.
    pub fn new(ambient: usize, terms: impl IntoIterator<Item = (IntVector, Complex64)>) -> Result<Self> {
        let mut map: BTreeMap<IntVector, Complex64> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: exp.dim(),
                });
            }
            if exp.0.iter().any(Signed::is_negative) {
                return Err(Error::InvalidParameter(format!("negative exponent {exp}")));
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidParameter("coefficient is not finite".into()));
            }
            *map.entry(exp).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(Error::InvalidParameter("the zero polynomial is not allowed".into()));
        }
        Ok(ComplexPolynomial { ambient, terms: map })
    }

    /// Convenience constructor with real coefficients.
    pub fn from_real(ambient: usize, terms: &[(&[i64], f64)]) -> Result<Self> {
        Self::new(
            ambient,
            terms.iter().map(|(e, c)| (IntVector::from_i64(e), Complex64::new(*c, 0.0))),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntVector, Complex64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    /// Exponents as machine integers. Errors if any does not fit in `u32`.
    pub fn small_terms(&self) -> Result<Vec<(Vec<u32>, Complex64)>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let exp = e
                    .0
                    .iter()
                    .map(|a| a.to_u32().ok_or_else(|| Error::InvalidParameter(format!("exponent {a} too large"))))
                    .collect::<Result<Vec<u32>>>()?;
                Ok((exp, *c))
            })
            .collect()
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: z.len(),
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (exp, c) in self.small_terms()? {
            let mut t = c;
            for (zi, &a) in z.iter().zip(&exp) {
                t *= zi.powu(a);
            }
            total += t;
        }
        Ok(total)
    }

    /// Whether some term has a positive exponent in variable `var`.
    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|e| !e.0[var].is_zero())
    }

    pub fn degree_in(&self, var: usize) -> usize {
        self.terms
            .keys()
            .map(|e| e.0[var].to_usize().unwrap_or(usize::MAX))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients `[a₀, a₁, …]` (lowest degree first) of the univariate
    /// polynomial in variable `var` obtained by fixing every other variable
    /// at the given value. `values[var]` is ignored.
    pub fn specialize(&self, var: usize, values: &[Complex64]) -> Result<Vec<Complex64>> {
        if values.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: values.len(),
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.degree_in(var) + 1];
        for (exp, c) in self.small_terms()? {
            let mut t = c;
            for (j, (&a, z)) in exp.iter().zip(values).enumerate() {
                if j != var {
                    t *= z.powu(a);
                }
            }
            coeffs[exp[var] as usize] += t;
        }
        Ok(coeffs)
    }
}

impl Mul for &ComplexPolynomial {
    type Output = Result<ComplexPolynomial>;
    fn mul(self, rhs: &ComplexPolynomial) -> Result<ComplexPolynomial> {
        if self.ambient != rhs.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: rhs.ambient,
            });
        }
        let mut terms = Vec::with_capacity(self.len() * rhs.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                terms.push((a + b, ca * cb));
            }
        }
        ComplexPolynomial::new(self.ambient, terms)
    }
}

/// trop(f) = max_α ⟨−α, x⟩: exponents negated (Log = −log|·|) and all
/// coefficients zero.
pub fn tropicalize_poly(f: &ComplexPolynomial) -> TropicalPolynomial {
    TropicalPolynomial::new(f.ambient, f.terms.keys().map(|e| (-e, 0.0))).expect("f has at least one term")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::qvec;
    use proptest::prelude::*;

    fn iv(c: &[i64]) -> IntVector {
        IntVector::from_i64(c)
    }

    fn line_q() -> TropicalPolynomial {
        TropicalPolynomial::from_i64(2, &[(&[0, 0], 0.0), (&[-1, 0], 0.0), (&[0, -1], 0.0)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let q = line_q();
        let r = q.eval(&[1.0, 2.0]).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.argmax, vec![iv(&[0, 0])]);

        let r = q.eval(&[0.0, 3.0]).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.argmax, vec![iv(&[-1, 0]), iv(&[0, 0])]);

        let q2 = TropicalPolynomial::from_i64(1, &[(&[1], 1.0), (&[2], 0.0)]).unwrap();
        let r = q2.eval(&[1.0]).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.argmax.len(), 2);
        let r = q2.eval_exact(&qvec(&[1])).unwrap();
        assert_eq!(r.value, Rational::from_integer(2.into()));
        assert_eq!(r.argmax.len(), 2);
    }

    #[test]
    fn duplicate_exponents_take_the_max() {
        let q = TropicalPolynomial::from_i64(1, &[(&[1], 1.0), (&[1], 3.0)]).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q.eval(&[0.0]).unwrap().value, 3.0);
        assert!(TropicalPolynomial::new(1, std::iter::empty()).is_err());
        assert!(q.eval(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn tropicalize_examples() {
        let f = ComplexPolynomial::from_real(2, &[(&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 1.0)]).unwrap();
        assert_eq!(tropicalize_poly(&f), line_q());

        let f = ComplexPolynomial::from_real(1, &[(&[2], 1.0)]).unwrap();
        let t = tropicalize_poly(&f);
        assert_eq!(t.terms().collect::<Vec<_>>(), vec![(&iv(&[-2]), 0.0)]);

        let f = ComplexPolynomial::from_real(2, &[(&[0, 0], 1.0), (&[1, 2], 1.0)]).unwrap();
        let t = tropicalize_poly(&f);
        let exps: Vec<IntVector> = t.exponents().cloned().collect();
        assert_eq!(exps, vec![iv(&[-1, -2]), iv(&[0, 0])]);
        assert_eq!(t.eval(&[1.0, 1.0]).unwrap().value, 0.0);
        assert_eq!(t.eval(&[-1.0, -1.0]).unwrap().value, 3.0);
    }

    #[test]
    fn complex_polynomial_validation() {
        assert!(ComplexPolynomial::from_real(1, &[(&[-1], 1.0)]).is_err());
        assert!(ComplexPolynomial::from_real(1, &[(&[1], 1.0), (&[1], -1.0)]).is_err());
        assert!(ComplexPolynomial::from_real(1, &[(&[1], 0.0)]).is_err());
    }

    #[test]
    fn specialize_and_eval() {
        // 1 + z1 z2² + 3 z2
        let f = ComplexPolynomial::from_real(2, &[(&[0, 0], 1.0), (&[1, 2], 1.0), (&[0, 1], 3.0)]).unwrap();
        let z1 = Complex64::new(2.0, 0.0);
        let c = f.specialize(1, &[z1, Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(c, vec![Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0), Complex64::new(2.0, 0.0)]);
        let z = [z1, Complex64::new(0.5, 1.0)];
        let direct = f.eval(&z).unwrap();
        let via = c[0] + c[1] * z[1] + c[2] * z[1] * z[1];
        assert!((direct - via).norm() < 1e-14);
        assert!(f.depends_on(0) && f.depends_on(1));
        assert_eq!(f.degree_in(1), 2);
    }

    #[test]
    fn product() {
        let a = ComplexPolynomial::from_real(1, &[(&[1], 1.0), (&[0], 1.0)]).unwrap();
        let b = ComplexPolynomial::from_real(1, &[(&[1], 1.0), (&[0], -1.0)]).unwrap();
        let p = (&a * &b).unwrap();
        assert_eq!(p, ComplexPolynomial::from_real(1, &[(&[2], 1.0), (&[0], -1.0)]).unwrap());
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = TropicalPolynomial> {
        prop::collection::vec((prop::collection::vec(-3i64..=3, n), -2.0f64..2.0), 1..=6)
            .prop_map(move |ts| TropicalPolynomial::new(n, ts.into_iter().map(|(e, c)| (IntVector::from(e), c))).unwrap())
    }

    proptest! {
        #[test]
        fn tropical_polynomials_are_convex(
            q in arb_poly(2),
            x in prop::collection::vec(-5.0f64..5.0, 2),
            y in prop::collection::vec(-5.0f64..5.0, 2),
            t in 0.0f64..=1.0,
        ) {
            let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| t * a + (1.0 - t) * b).collect();
            let lhs = q.eval(&z).unwrap().value;
            let rhs = t * q.eval(&x).unwrap().value + (1.0 - t) * q.eval(&y).unwrap().value;
            prop_assert!(lhs <= rhs + 1e-9);
        }
    }
}
