//! Exact conversion between the two descriptions of a polyhedral cone
//! `{x : E x = 0, A x ≥ 0}` ↔ `cone(rays) + span(lineality)`.
//!
//! Extreme rays of the pointed part are found by enumerating active sets of
//! rank d−1. That is exponential in the worst case but the ambient
//! dimension here never exceeds five (four plus homogenization).

use itertools::Itertools;
use num_traits::Zero;

use crate::lattice::rational::{canonical_basis, dot, kernel, primitive_int, rank, QVector};
use crate::lattice::IntVector;

/// Generators of a cone: extreme rays of the pointed part (each lying in the
/// orthogonal complement of the lineality space) plus a canonical lineality
/// basis. Both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ConeGenerators {
    pub rays: Vec<IntVector>,
    pub lineality: Vec<IntVector>,
}

pub(crate) fn generators_from_constraints(d: usize, eqs: &[QVector], ineqs: &[QVector]) -> ConeGenerators {
    let all: Vec<QVector> = eqs.iter().chain(ineqs).cloned().collect();
    let lin = kernel(&all, d);
    let lineality = canonical_basis(&lin, d);

    let mut fixed: Vec<QVector> = eqs.to_vec();
    fixed.extend(lin);
    let base_rank = rank(&fixed, d);
    let ineqs: Vec<&QVector> = ineqs.iter().filter(|a| !a.iter().all(Zero::is_zero)).collect();

    let mut rays: Vec<IntVector> = Vec::new();
    if base_rank < d {
        let need = d - 1 - base_rank;
        for subset in ineqs.iter().combinations(need) {
            let mut rows = fixed.clone();
            rows.extend(subset.iter().map(|a| (**a).clone()));
            let ker = kernel(&rows, d);
            if ker.len() != 1 {
                continue;
            }
            let r = &ker[0];
            let signs: Vec<_> = ineqs.iter().map(|a| dot(a, r)).collect();
            let candidate = if signs.iter().all(|s| *s >= Zero::zero()) {
                primitive_int(r)
            } else if signs.iter().all(|s| *s <= Zero::zero()) {
                let neg: QVector = r.iter().map(|x| -x).collect();
                primitive_int(&neg)
            } else {
                continue;
            };
            if !rays.contains(&candidate) {
                rays.push(candidate);
            }
        }
    }
    rays.sort();
    ConeGenerators { rays, lineality }
}

/// Facet description of `cone(rays) + span(lines)`: returns the canonical
/// equation basis and the facet normals, computed as the generators of the
/// dual cone.
pub(crate) fn constraints_from_generators(
    d: usize,
    rays: &[QVector],
    lines: &[QVector],
) -> (Vec<IntVector>, Vec<IntVector>) {
    let dual = generators_from_constraints(d, lines, rays);
    (dual.lineality, dual.rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::qvec;

    fn iv(c: &[i64]) -> IntVector {
        IntVector::from_i64(c)
    }

    #[test]
    fn quadrant_round_trip() {
        let (eqs, ineqs) = constraints_from_generators(2, &[qvec(&[1, 0]), qvec(&[0, 1])], &[]);
        assert!(eqs.is_empty());
        assert_eq!(ineqs, vec![iv(&[0, 1]), iv(&[1, 0])]);
        let g = generators_from_constraints(2, &[], &[qvec(&[1, 0]), qvec(&[0, 1])]);
        assert_eq!(g.rays, vec![iv(&[0, 1]), iv(&[1, 0])]);
        assert!(g.lineality.is_empty());
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let (_, ineqs) =
            constraints_from_generators(2, &[qvec(&[1, 0]), qvec(&[1, 1]), qvec(&[0, 1])], &[]);
        let back = generators_from_constraints(2, &[], &ineqs.iter().map(|v| v.to_rational()).collect::<Vec<_>>());
        assert_eq!(back.rays, vec![iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn whole_space_and_origin() {
        let g = generators_from_constraints(2, &[], &[]);
        assert_eq!(g.lineality.len(), 2);
        assert!(g.rays.is_empty());
        let g = generators_from_constraints(2, &[qvec(&[1, 0]), qvec(&[0, 1])], &[]);
        assert!(g.lineality.is_empty() && g.rays.is_empty());
    }
}
