use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::hypersurface::TropicalCycle;
use super::polynomial::ComplexPolynomial;
use crate::error::{Error, Result};
use crate::lattice::{primitive, IntVector};
use crate::polyhedra::{Cone, WeightedComplex, MAX_AMBIENT};

/// Bergman fan of the uniform matroid U_{p+1,n+1}: the p-dimensional cones
/// spanned by the p-subsets of {e₁, …, eₙ, −(e₁+…+eₙ)}, each of weight 1.
pub fn uniform_bergman_fan(p: usize, n: usize) -> Result<TropicalCycle> {
    if p < 1 || p > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ p ≤ n, got p = {p}, n = {n}")));
    }
    if n > MAX_AMBIENT {
        return Err(Error::UnsupportedDimension {
            found: n,
            max: MAX_AMBIENT,
        });
    }
    let mut rays: Vec<IntVector> = (0..n).map(|i| IntVector::unit(n, i)).collect();
    rays.push(IntVector::from_i64(&vec![-1; n]));
    let cells = rays
        .iter()
        .cloned()
        .combinations(p)
        .map(|gens| Ok((Cone::from_rays(n, &gens)?.into_polyhedron(), BigInt::one())))
        .collect::<Result<Vec<_>>>()?;
    TropicalCycle::new(WeightedComplex::new(n, p, cells)?)
}

/// Writes β = w·α with α primitive and returns z^{α₊} − c·z^{α₋} together
/// with the weight w. Here α₊ and α₋ are the positive and negative parts
/// of α, and `c` must lie on the unit circle.
pub fn fiber_binomial(beta: &IntVector, c: Complex64) -> Result<(ComplexPolynomial, BigInt)> {
    let (alpha, weight) = primitive(beta)?;
    if !c.re.is_finite() || !c.im.is_finite() || (c.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("c = {c} is not on the unit circle")));
    }
    let plus = IntVector(alpha.0.iter().map(|a| if a.is_positive() { a.clone() } else { BigInt::zero() }).collect());
    let minus = IntVector(alpha.0.iter().map(|a| if a.is_negative() { -a } else { BigInt::zero() }).collect());
    let f = ComplexPolynomial::new(beta.dim(), [(plus, Complex64::new(1.0, 0.0)), (minus, -c)])?;
    Ok((f, weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::{tropical_hypersurface, tropicalize_poly};

    fn iv(c: &[i64]) -> IntVector {
        IntVector::from_i64(c)
    }

    fn binomial(plus: &[i64], minus: &[i64], c: Complex64) -> ComplexPolynomial {
        ComplexPolynomial::new(plus.len(), [(iv(plus), Complex64::new(1.0, 0.0)), (iv(minus), -c)]).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn small_bergman_fans() {
        let f = uniform_bergman_fan(1, 2).unwrap();
        let mut rays: Vec<IntVector> = f.cells().iter().map(|(c, _)| c.rays()[0].clone()).collect();
        rays.sort();
        assert_eq!(rays, vec![iv(&[-1, -1]), iv(&[0, 1]), iv(&[1, 0])]);
        assert!(f.cells().iter().all(|(_, w)| w.is_one()));

        assert_eq!(uniform_bergman_fan(2, 3).unwrap().cells().len(), 6);
        for n in 1..=4 {
            assert_eq!(uniform_bergman_fan(n, n).unwrap().cells().len(), n + 1);
        }
    }

    #[test]
    fn bergman_fans_are_balanced() {
        for n in 1..=4 {
            for p in 1..=n {
                let f = uniform_bergman_fan(p, n).unwrap();
                assert_eq!(f.cells().len(), binom(n + 1, p));
                assert!(f.check_balancing().balanced, "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn bergman_parameter_range() {
        assert!(uniform_bergman_fan(0, 2).is_err());
        assert!(uniform_bergman_fan(3, 2).is_err());
        assert!(matches!(uniform_bergman_fan(1, 5), Err(Error::UnsupportedDimension { .. })));
    }

    #[test]
    fn bergman_line_is_the_tropical_line() {
        let f = ComplexPolynomial::from_real(2, &[(&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 1.0)]).unwrap();
        let line = tropical_hypersurface(&tropicalize_poly(&f)).unwrap();
        assert_eq!(line, uniform_bergman_fan(1, 2).unwrap());
    }

    #[test]
    fn fiber_binomial_examples() {
        let one = Complex64::new(1.0, 0.0);
        let (f, w) = fiber_binomial(&iv(&[1, -1]), one).unwrap();
        assert_eq!(f, binomial(&[1, 0], &[0, 1], one));
        assert!(w.is_one());

        let (f, w) = fiber_binomial(&iv(&[2, -2]), one).unwrap();
        assert_eq!(f, binomial(&[1, 0], &[0, 1], one));
        assert_eq!(w, BigInt::from(2));

        let (f, w) = fiber_binomial(&iv(&[1, 1]), -one).unwrap();
        assert_eq!(f, binomial(&[1, 1], &[0, 0], -one));
        assert!(w.is_one());
        assert!(f.eval(&[Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0)]).unwrap().norm() < 1e-15);

        assert_eq!(fiber_binomial(&iv(&[0, 0]), one), Err(Error::ZeroVector));
        assert!(fiber_binomial(&iv(&[1, 0]), Complex64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn fiber_binomial_hypersurface_weight() {
        // The fiber of z^β is a hyperplane orthogonal to β; its tropical
        // hypersurface has weight 1, and w copies recover the weight w.
        let (f, w) = fiber_binomial(&iv(&[2, -4]), Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(w, BigInt::from(2));
        let c = tropical_hypersurface(&tropicalize_poly(&f)).unwrap();
        assert_eq!(c.cells().len(), 1);
        assert!(c.cells()[0].1.is_one());
        assert_eq!(c.cells()[0].0.lineality(), &[iv(&[2, 1])]);
    }
}
