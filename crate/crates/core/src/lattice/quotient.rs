use num_bigint::BigInt;
use num_traits::Zero;

use super::{smith_normal_form, IntMatrix, IntVector};
use crate::error::{Error, Result};

/// Presentation of ℤⁿ/(H∩ℤⁿ) for a rational subspace H.
///
/// `sublattice` is a basis of the saturated lattice H∩ℤⁿ and `complement`
/// completes it to a ℤ-basis of ℤⁿ. Quotient classes are written in the
/// coordinates of the complement vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientLattice {
    ambient: usize,
    sublattice: Vec<IntVector>,
    complement: Vec<IntVector>,
    // x ↦ x · to_coords gives coordinates in the basis [sublattice; complement].
    to_coords: IntMatrix,
}

impl QuotientLattice {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn sublattice(&self) -> &[IntVector] {
        &self.sublattice
    }

    pub fn complement(&self) -> &[IntVector] {
        &self.complement
    }

    /// Rank of the quotient ℤⁿ/(H∩ℤⁿ).
    pub fn quotient_rank(&self) -> usize {
        self.complement.len()
    }

    /// The full n×n basis matrix, sublattice rows first.
    pub fn basis_matrix(&self) -> IntMatrix {
        let rows: Vec<IntVector> = self.sublattice.iter().chain(&self.complement).cloned().collect();
        IntMatrix::from_rows(self.ambient, &rows).expect("basis rows have ambient length")
    }

    /// Coordinates of `x` in the basis `[sublattice; complement]`.
    pub fn coordinates(&self, x: &IntVector) -> IntVector {
        let n = self.ambient;
        IntVector((0..n).map(|j| (0..n).map(|i| &x[i] * self.to_coords.get(i, j)).sum()).collect())
    }

    /// Class of `x` in the quotient, as an element of ℤ^{n−p}.
    pub fn quotient_coords(&self, x: &IntVector) -> IntVector {
        let c = self.coordinates(x);
        IntVector(c.0[self.sublattice.len()..].to_vec())
    }

    /// The canonical representative Σ cⱼ·complementⱼ of a quotient class.
    pub fn lift(&self, class: &IntVector) -> IntVector {
        let mut out = IntVector::zero(self.ambient);
        for (c, u) in class.0.iter().zip(&self.complement) {
            if !c.is_zero() {
                out = &out + &u.scale(c);
            }
        }
        out
    }

    /// Whether `x` lies in H∩ℤⁿ.
    pub fn contains(&self, x: &IntVector) -> bool {
        self.quotient_coords(x).is_zero()
    }

    pub fn reduce(&self, x: &IntVector) -> IntVector {
        self.lift(&self.quotient_coords(x))
    }
}

/// Saturates the lattice spanned by `spanning` inside its rational span and
/// completes the result to a ℤ-basis of ℤⁿ.
///
/// An empty (or all-zero) spanning set yields the zero sublattice with the
/// standard basis as complement.
pub fn saturate_and_complete(ambient: usize, spanning: &[IntVector]) -> Result<QuotientLattice> {
    let m = IntMatrix::from_rows(ambient, spanning)?;
    let s = smith_normal_form(&m);
    let r = s.rank();
    let rows = s.v_inv.rows();
    if rows.len() != ambient {
        return Err(Error::DimensionMismatch {
            expected: ambient,
            found: rows.len(),
        });
    }
    let (sub, comp) = rows.split_at(r);
    Ok(QuotientLattice {
        ambient,
        sublattice: sub.to_vec(),
        complement: comp.to_vec(),
        to_coords: s.v,
    })
}

/// Index of the lattice generated by `generators` inside its saturation
/// (product of the nonzero Smith invariant factors).
pub fn lattice_index(ambient: usize, generators: &[IntVector]) -> Result<BigInt> {
    let m = IntMatrix::from_rows(ambient, generators)?;
    Ok(smith_normal_form(&m)
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_zero())
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::rank;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn v(c: &[i64]) -> IntVector {
        IntVector::from_i64(c)
    }

    fn assert_valid(q: &QuotientLattice, spanning: &[IntVector]) {
        let det = q.basis_matrix().determinant().unwrap();
        assert_eq!(det.abs(), BigInt::from(1));
        let n = q.ambient();
        let span_rank = rank(&spanning.iter().map(|x| x.to_rational()).collect::<Vec<_>>(), n);
        assert_eq!(q.sublattice().len(), span_rank);
        let both: Vec<_> = spanning.iter().chain(q.sublattice()).map(|x| x.to_rational()).collect();
        assert_eq!(rank(&both, n), span_rank);
        for s in spanning {
            assert!(q.contains(s));
        }
    }

    #[test]
    fn diagonal_vector_in_the_plane() {
        let span = [v(&[2, 2])];
        let q = saturate_and_complete(2, &span).unwrap();
        assert_valid(&q, &span);
        assert_eq!(q.sublattice(), &[v(&[1, 1])]);
        assert_eq!(q.complement(), &[v(&[0, 1])]);
    }

    #[test]
    fn full_lattice_has_empty_complement() {
        let span = [v(&[1, 0]), v(&[0, 1])];
        let q = saturate_and_complete(2, &span).unwrap();
        assert_valid(&q, &span);
        assert!(q.complement().is_empty());
    }

    #[test]
    fn line_in_three_space() {
        let span = [v(&[1, 2, 3])];
        let q = saturate_and_complete(3, &span).unwrap();
        assert_valid(&q, &span);
        assert_eq!(q.complement().len(), 2);
        let sub = &q.sublattice()[0];
        assert!(sub == &v(&[1, 2, 3]) || sub == &v(&[-1, -2, -3]));
    }

    #[test]
    fn empty_spanning_set_gives_the_torus() {
        let q = saturate_and_complete(3, &[]).unwrap();
        assert!(q.sublattice().is_empty());
        assert_eq!(q.quotient_rank(), 3);
        assert_eq!(q.quotient_coords(&v(&[4, 5, 6])), v(&[4, 5, 6]));
    }

    #[test]
    fn index_of_non_saturated_lattice() {
        assert_eq!(lattice_index(2, &[v(&[1, 0]), v(&[1, 2])]).unwrap(), BigInt::from(2));
        assert_eq!(lattice_index(2, &[v(&[2, 2])]).unwrap(), BigInt::from(2));
    }

    proptest! {
        #[test]
        fn completion_is_unimodular(entries in proptest::collection::vec(-9i64..9, 8), k in 1usize..3) {
            let span: Vec<IntVector> = (0..k).map(|i| v(&entries[i * 4..i * 4 + 4])).collect();
            prop_assume!(span.iter().any(|s| !s.is_zero()));
            let q = saturate_and_complete(4, &span).unwrap();
            assert_valid(&q, &span);
            // lift ∘ quotient_coords is idempotent and stays in the class
            let x = v(&entries[0..4]);
            let r = q.reduce(&x);
            prop_assert!(q.contains(&(&x - &r)));
            prop_assert_eq!(q.reduce(&r), r);
        }
    }
}
