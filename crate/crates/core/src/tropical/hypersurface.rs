use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;

use super::polynomial::TropicalPolynomial;
use crate::error::{Error, Result};
use crate::lattice::rational::{dot, Rational};
use crate::lattice::{lattice_length, IntVector};
use crate::polyhedra::{AffineForm, BalancingReport, Polyhedron, WeightedComplex};

/// Largest ambient dimension accepted by [`tropical_hypersurface`].
pub const MAX_HYPERSURFACE_AMBIENT: usize = 3;

/// A weighted complex that satisfies the balancing condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCycle(WeightedComplex);

impl TropicalCycle {
    /// Errors with [`Error::Unbalanced`] (carrying the number of violating
    /// faces) if the complex is not balanced.
    pub fn new(complex: WeightedComplex) -> Result<Self> {
        let report = complex.check_balancing();
        if !report.balanced {
            return Err(Error::Unbalanced(report.violations.len()));
        }
        Ok(TropicalCycle(complex))
    }

    pub fn complex(&self) -> &WeightedComplex {
        &self.0
    }

    pub fn into_complex(self) -> WeightedComplex {
        self.0
    }

    pub fn ambient(&self) -> usize {
        self.0.ambient()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn cells(&self) -> &[(Polyhedron, BigInt)] {
        self.0.cells()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check_balancing(&self) -> BalancingReport {
        self.0.check_balancing()
    }
}

/// The corner locus of `q`: every (n−1)-dimensional region where two or
/// more terms attain the maximum, weighted by the lattice length of the
/// difference between the extreme tying exponents.
///
/// Ties are decided exactly, with each float coefficient read as the
/// rational it represents.
pub fn tropical_hypersurface(q: &TropicalPolynomial) -> Result<TropicalCycle> {
    let n = q.ambient();
    if n > MAX_HYPERSURFACE_AMBIENT {
        return Err(Error::UnsupportedDimension {
            found: n,
            max: MAX_HYPERSURFACE_AMBIENT,
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("tropical polynomial in zero variables".into()));
    }
    let terms = q.exact_terms();
    let pairs: Vec<(usize, usize)> = (0..terms.len()).tuple_combinations().collect();
    let cells: Vec<Polyhedron> = pairs
        .par_iter()
        .filter_map(|&(i, j)| tie_region(&terms, i, j))
        .filter(|p| p.dim() + 1 == n)
        .collect();
    let distinct: BTreeSet<Polyhedron> = cells.into_iter().collect();
    let weighted: Vec<(Polyhedron, BigInt)> = distinct
        .into_par_iter()
        .map(|cell| {
            let w = cell_weight(&terms, &cell);
            (cell, w)
        })
        .collect();
    TropicalCycle::new(WeightedComplex::new(n, n - 1, weighted)?)
}

/// `{x : term i = term j ≥ every other term}`.
fn tie_region(terms: &[(IntVector, Rational)], i: usize, j: usize) -> Option<Polyhedron> {
    let (ai, ci) = &terms[i];
    let (aj, cj) = &terms[j];
    // ⟨αᵢ − αⱼ, x⟩ = cⱼ − cᵢ
    let eq = AffineForm::new(ai - aj, cj - ci);
    let ineqs: Vec<AffineForm> = terms
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i && *k != j)
        .map(|(_, (ak, ck))| AffineForm::new(ai - ak, ck - ci))
        .collect();
    Polyhedron::from_constraints(ai.dim(), &[eq], &ineqs)
}

/// Largest lattice length among differences of the exponents tying on the
/// relative interior of `cell`. Those exponents are collinear, so this is
/// the length between the two extreme ones.
fn cell_weight(terms: &[(IntVector, Rational)], cell: &Polyhedron) -> BigInt {
    let x = cell.relative_interior_point();
    let vals: Vec<Rational> = terms.iter().map(|(a, c)| dot(&a.to_rational(), &x) + c).collect();
    let max = vals.iter().max().expect("nonempty");
    let tying: Vec<&IntVector> = terms.iter().zip(&vals).filter(|(_, v)| *v == max).map(|((a, _), _)| a).collect();
    tying
        .iter()
        .tuple_combinations()
        .map(|(a, b)| lattice_length(&(*a - *b)).expect("distinct exponents"))
        .max()
        .expect("a cell has at least two tying terms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::qvec;
    use crate::polyhedra::add_cycles;
    use crate::tropical::{tropicalize_poly, ComplexPolynomial};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn iv(c: &[i64]) -> IntVector {
        IntVector::from_i64(c)
    }

    fn ray_cells(c: &TropicalCycle) -> Vec<(IntVector, i64)> {
        let mut out: Vec<(IntVector, i64)> = c
            .cells()
            .iter()
            .map(|(p, w)| {
                assert!(p.is_cone());
                assert_eq!(p.rays().len(), 1);
                (p.rays()[0].clone(), i64::try_from(w).unwrap())
            })
            .collect();
        out.sort();
        out
    }

    /// Directions on the unit circle where the argmax of a homogeneous
    /// tropical polynomial changes, located by scanning and bisection.
    fn kink_directions(q: &TropicalPolynomial, samples: usize) -> Vec<(f64, f64)> {
        let top = |t: f64| {
            let v = q.term_values(&[t.cos(), t.sin()]);
            v.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0
        };
        let step = std::f64::consts::TAU / samples as f64;
        let mut out = Vec::new();
        for k in 0..samples {
            let (mut a, mut b) = (k as f64 * step + 1e-7, (k + 1) as f64 * step + 1e-7);
            if top(a) == top(b) {
                continue;
            }
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if top(m) == top(a) {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push((a.cos(), a.sin()));
        }
        out
    }

    #[test]
    fn tropical_line_from_negated_exponents() {
        let q = TropicalPolynomial::from_i64(2, &[(&[0, 0], 0.0), (&[-1, 0], 0.0), (&[0, -1], 0.0)]).unwrap();
        let c = tropical_hypersurface(&q).unwrap();
        assert_eq!(ray_cells(&c), vec![(iv(&[-1, -1]), 1), (iv(&[0, 1]), 1), (iv(&[1, 0]), 1)]);
        let kinks = kink_directions(&q, 3600);
        assert_eq!(kinks.len(), 3);
        for (kx, ky) in kinks {
            assert!(c.cells().iter().any(|(p, _)| {
                let r = p.rays()[0].to_f64();
                let len = r[0].hypot(r[1]);
                (r[0] / len - kx).abs() < 1e-6 && (r[1] / len - ky).abs() < 1e-6
            }));
        }
    }

    #[test]
    fn tropical_line_positive_exponents() {
        let q = TropicalPolynomial::from_i64(2, &[(&[0, 0], 0.0), (&[1, 0], 0.0), (&[0, 1], 0.0)]).unwrap();
        let c = tropical_hypersurface(&q).unwrap();
        assert_eq!(ray_cells(&c), vec![(iv(&[-1, 0]), 1), (iv(&[0, -1]), 1), (iv(&[1, 1]), 1)]);
        assert_eq!(kink_directions(&q, 3600).len(), 3);
    }

    #[test]
    fn weight_two_line() {
        let q = TropicalPolynomial::from_i64(2, &[(&[0, 0], 0.0), (&[-2, 0], 0.0)]).unwrap();
        let c = tropical_hypersurface(&q).unwrap();
        assert_eq!(c.cells().len(), 1);
        let (cell, w) = &c.cells()[0];
        assert_eq!(*w, BigInt::from(2));
        assert_eq!(cell.lineality(), &[iv(&[0, 1])]);
        assert!(cell.contains(&qvec(&[0, 5])));
    }

    #[test]
    fn affine_cell() {
        let q = TropicalPolynomial::from_i64(2, &[(&[0, 0], 0.0), (&[-1, 0], 1.0)]).unwrap();
        let c = tropical_hypersurface(&q).unwrap();
        assert_eq!(c.cells().len(), 1);
        assert!(c.cells()[0].0.contains(&qvec(&[1, -7])));
        assert!(!c.cells()[0].0.contains(&qvec(&[0, 0])));
    }

    #[test]
    fn generic_affine_terms_give_vertices() {
        let q = TropicalPolynomial::from_i64(2, &[(&[0, 0], 0.0), (&[1, 0], -1.0), (&[0, 1], 2.0), (&[1, 1], 0.5)]).unwrap();
        let c = tropical_hypersurface(&q).unwrap();
        assert!(c.cells().iter().any(|(p, _)| !p.vertices().is_empty() && !p.is_cone()));
        assert!(c.check_balancing().balanced);
    }

    #[test]
    fn collinear_ties_use_the_extreme_difference() {
        // 0, x, 2x with coefficients making all three tie at x = 0.
        let q = TropicalPolynomial::from_i64(1, &[(&[0], 0.0), (&[1], 0.0), (&[2], 0.0)]).unwrap();
        let c = tropical_hypersurface(&q).unwrap();
        assert_eq!(c.cells().len(), 1);
        assert_eq!(c.cells()[0].1, BigInt::from(2));
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn single_term_is_empty() {
        let q = TropicalPolynomial::from_i64(2, &[(&[-2, 0], 0.0)]).unwrap();
        let c = tropical_hypersurface(&q).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn ambient_dimension_is_capped() {
        let q = TropicalPolynomial::from_i64(4, &[(&[0, 0, 0, 0], 0.0), (&[1, 0, 0, 0], 0.0)]).unwrap();
        assert_eq!(tropical_hypersurface(&q), Err(Error::UnsupportedDimension { found: 4, max: 3 }));
    }

    #[test]
    fn tropical_plane_in_three_space() {
        let q = TropicalPolynomial::from_i64(3, &[(&[0, 0, 0], 0.0), (&[1, 0, 0], 0.0), (&[0, 1, 0], 0.0), (&[0, 0, 1], 0.0)]).unwrap();
        let c = tropical_hypersurface(&q).unwrap();
        assert_eq!(c.cells().len(), 6);
        assert!(c.cells().iter().all(|(_, w)| *w == BigInt::from(1)));
    }

    fn random_polynomial(rng: &mut ChaCha8Rng, n: usize) -> TropicalPolynomial {
        let k = rng.random_range(2..=6);
        let terms: Vec<(IntVector, f64)> = (0..k)
            .map(|_| {
                let e: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
                (IntVector::from(e), rng.random_range(-2.0..2.0))
            })
            .collect();
        TropicalPolynomial::new(n, terms).unwrap()
    }

    #[test]
    fn random_hypersurfaces_are_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..50 {
            let n = 2 + i % 2;
            let q = random_polynomial(&mut rng, n);
            let c = tropical_hypersurface(&q);
            assert!(c.is_ok(), "{q:?}: {c:?}");
        }
    }

    #[test]
    fn random_hypersurfaces_with_integer_coefficients_are_balanced() {
        // Integer coefficients produce many non-generic ties.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..30 {
            let n = 2 + i % 2;
            let k = rng.random_range(2..=6);
            let terms: Vec<(IntVector, f64)> = (0..k)
                .map(|_| {
                    let e: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
                    (IntVector::from(e), f64::from(rng.random_range(-2..=2)))
                })
                .collect();
            let q = TropicalPolynomial::new(n, terms).unwrap();
            assert!(tropical_hypersurface(&q).is_ok(), "{q:?}");
        }
    }

    fn hyp(f: &ComplexPolynomial) -> WeightedComplex {
        tropical_hypersurface(&tropicalize_poly(f)).unwrap().into_complex()
    }

    fn assert_same_cycle(a: &WeightedComplex, b: &WeightedComplex) {
        let diff = add_cycles(a, &b.scaled(&BigInt::from(-1))).unwrap();
        assert!(diff.is_empty(), "{a:?} vs {b:?}: difference {diff:?}");
    }

    #[test]
    fn product_gives_sum_of_hypersurfaces() {
        let line = ComplexPolynomial::from_real(2, &[(&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 1.0)]).unwrap();
        let mono = ComplexPolynomial::from_real(2, &[(&[2, 1], 3.0)]).unwrap();
        let bin = ComplexPolynomial::from_real(2, &[(&[1, 0], 1.0), (&[0, 1], -1.0)]).unwrap();
        let bin2 = ComplexPolynomial::from_real(2, &[(&[1, 0], 1.0), (&[0, 0], 1.0)]).unwrap();

        for (f1, f2) in [(&mono, &line), (&mono, &bin), (&bin, &bin2), (&bin, &line), (&bin, &bin)] {
            let prod = (f1 * f2).unwrap();
            let sum = add_cycles(&hyp(f1), &hyp(f2)).unwrap();
            assert_same_cycle(&hyp(&prod), &sum);
            assert!(sum.check_balancing().balanced);
        }
    }
}
