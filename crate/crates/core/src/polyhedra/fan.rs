use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::IntVector;

/// A rational polyhedral fan, stored by its maximal cones.
///
/// Construction checks that every pair of maximal cones meets in a common
/// face. Lower-dimensional cones are generated on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient: usize,
    maximal: Vec<Cone>,
}

impl Fan {
    /// Builds a fan from a list of cones. Cones that are faces of other
    /// listed cones are absorbed.
    pub fn new(ambient: usize, cones: Vec<Cone>) -> Result<Fan> {
        for c in &cones {
            if c.ambient() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: c.ambient(),
                });
            }
        }
        let mut cones = cones;
        cones.sort();
        cones.dedup();
        let maximal: Vec<Cone> = cones
            .iter()
            .filter(|c| !cones.iter().any(|d| d != *c && c.is_face_of(d)))
            .cloned()
            .collect();
        for (i, a) in maximal.iter().enumerate() {
            for b in &maximal[i + 1..] {
                let meet = a.intersect(b);
                if !meet.is_face_of(a) || !meet.is_face_of(b) {
                    return Err(Error::InvalidFan(format!(
                        "cones {:?} and {:?} do not meet in a common face",
                        a.rays(),
                        b.rays()
                    )));
                }
            }
        }
        if maximal.is_empty() {
            return Ok(Fan {
                ambient,
                maximal: vec![Cone::zero(ambient)],
            });
        }
        Ok(Fan { ambient, maximal })
    }

    pub fn from_rays(ambient: usize, cones: &[Vec<IntVector>]) -> Result<Fan> {
        let cones = cones
            .iter()
            .map(|rays| Cone::from_rays(ambient, rays))
            .collect::<Result<Vec<_>>>()?;
        Fan::new(ambient, cones)
    }

    /// The fan `{0}`.
    pub fn trivial(ambient: usize) -> Fan {
        Fan {
            ambient,
            maximal: vec![Cone::zero(ambient)],
        }
    }

    /// The fan of ℙⁿ: cones spanned by proper subsets of
    /// `{e₁, …, eₙ, −(e₁+…+eₙ)}`.
    pub fn projective_space(n: usize) -> Result<Fan> {
        let rays = projective_rays(n);
        let cones = (0..=n)
            .map(|skip| {
                let gens: Vec<IntVector> = rays.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect();
                Cone::from_rays(n, &gens)
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::new(n, cones)
    }

    /// The fan of (ℙ¹)ⁿ: the 2ⁿ coordinate orthants.
    pub fn product_of_lines(n: usize) -> Result<Fan> {
        let cones = (0..1usize << n)
            .map(|mask| {
                let gens: Vec<IntVector> = (0..n)
                    .map(|i| {
                        let e = IntVector::unit(n, i);
                        if mask >> i & 1 == 1 {
                            -&e
                        } else {
                            e
                        }
                    })
                    .collect();
                Cone::from_rays(n, &gens)
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::new(n, cones)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    /// All cones of the fan, sorted by dimension and then canonically.
    pub fn cones(&self) -> Vec<Cone> {
        let set: BTreeSet<Cone> = self.maximal.iter().flat_map(Cone::faces).collect();
        set.into_iter().collect()
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<Cone> {
        self.cones().into_iter().filter(|c| c.dim() == d).collect()
    }

    /// Whether `x` lies in the support of the fan.
    pub fn support_contains(&self, x: &[crate::lattice::rational::Rational]) -> bool {
        self.maximal.iter().any(|c| c.contains(x))
    }

    /// Whether every cone is unimodular. Errors if some cone is not pointed.
    pub fn is_unimodular(&self) -> Result<bool> {
        for c in &self.maximal {
            if !c.is_unimodular()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the support is all of ℝⁿ: some cone is full-dimensional,
    /// every codimension-one cone bounds exactly two full-dimensional cones,
    /// and the full-dimensional cones are connected through shared facets.
    pub fn is_complete(&self) -> bool {
        let n = self.ambient;
        let full: Vec<&Cone> = self.maximal.iter().filter(|c| c.dim() == n).collect();
        if full.is_empty() {
            return false;
        }
        if full.iter().any(|c| c.lineality().len() == n) {
            return true;
        }
        let mut owners: BTreeMap<Cone, Vec<usize>> = BTreeMap::new();
        for (i, c) in full.iter().enumerate() {
            for f in c.facets() {
                owners.entry(f).or_default().push(i);
            }
        }
        if owners.values().any(|o| o.len() != 2) {
            return false;
        }
        let mut seen = vec![false; full.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for o in owners.values().filter(|o| o.contains(&i)) {
                for &j in o {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub(crate) fn projective_rays(n: usize) -> Vec<IntVector> {
    let mut rays: Vec<IntVector> = (0..n).map(|i| IntVector::unit(n, i)).collect();
    rays.push(IntVector::from_i64(&vec![-1; n]));
    rays
}

/// The fan of all pairwise intersections of cones of `a` and `b`; its
/// support is `|a| ∩ |b|`.
pub fn common_refinement(a: &Fan, b: &Fan) -> Result<Fan> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch {
            expected: a.ambient,
            found: b.ambient,
        });
    }
    let pairs: Vec<(&Cone, &Cone)> = a
        .maximal
        .iter()
        .flat_map(|x| b.maximal.iter().map(move |y| (x, y)))
        .collect();
    let meets: Vec<Cone> = pairs.par_iter().map(|(x, y)| x.intersect(y)).collect();
    Fan::new(a.ambient, meets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::qvec;
    use crate::polyhedra::cone::grid_points;

    fn iv(c: &[i64]) -> IntVector {
        IntVector::from_i64(c)
    }

    fn rotated_quadrants() -> Fan {
        let r = [iv(&[1, 1]), iv(&[1, -1]), iv(&[-1, -1]), iv(&[-1, 1])];
        let cones: Vec<Vec<IntVector>> = (0..4).map(|i| vec![r[i].clone(), r[(i + 1) % 4].clone()]).collect();
        Fan::from_rays(2, &cones).unwrap()
    }

    /// In the plane, the maximal cones of a complete fan are the sectors
    /// between angularly consecutive rays, so their number is the number of
    /// distinct rays.
    fn planar_sector_count(fans: &[&Fan]) -> usize {
        let rays: BTreeSet<IntVector> = fans.iter().flat_map(|f| f.cones_of_dim(1)).flat_map(|c| c.rays().to_vec()).collect();
        rays.len()
    }

    #[test]
    fn axis_and_rotated_quadrants_refine_to_octants() {
        let a = Fan::product_of_lines(2).unwrap();
        let b = rotated_quadrants();
        let r = common_refinement(&a, &b).unwrap();
        assert_eq!(r.maximal_cones().len(), 8);
        assert_eq!(planar_sector_count(&[&a, &b]), 8);
        assert!(r.is_complete());
    }

    #[test]
    fn refinement_is_idempotent() {
        let a = Fan::projective_space(2).unwrap();
        assert_eq!(common_refinement(&a, &a).unwrap(), a);
    }

    #[test]
    fn projective_plane_against_quadrants() {
        let a = Fan::projective_space(2).unwrap();
        let b = Fan::product_of_lines(2).unwrap();
        let r = common_refinement(&a, &b).unwrap();
        let full = r.maximal_cones().iter().filter(|c| c.dim() == 2).count();
        assert_eq!(full, planar_sector_count(&[&a, &b]));
        assert_eq!(full, 5);
    }

    #[test]
    fn refinement_support_is_the_intersection() {
        let a = Fan::projective_space(2).unwrap();
        let b = Fan::from_rays(2, &[vec![iv(&[1, 0]), iv(&[1, 3])], vec![iv(&[-1, 2]), iv(&[-2, -1])]]).unwrap();
        let r = common_refinement(&a, &b).unwrap();
        let pts = grid_points(2, 2, 8);
        assert!(pts.len() >= 1000);
        for x in &pts {
            assert_eq!(r.support_contains(x), a.support_contains(x) && b.support_contains(x), "{x:?}");
        }
    }

    #[test]
    fn completeness() {
        assert!(Fan::projective_space(2).unwrap().is_complete());
        assert!(Fan::projective_space(3).unwrap().is_complete());
        assert!(Fan::product_of_lines(2).unwrap().is_complete());
        let quadrant = Fan::from_rays(2, &[vec![iv(&[1, 0]), iv(&[0, 1])]]).unwrap();
        assert!(!quadrant.is_complete());
        let half_planes = Fan::from_rays(2, &[vec![iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, 1])], vec![iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, -1])]]).unwrap();
        assert!(half_planes.is_complete());
        // Two opposite quadrants share only the origin.
        let opposite = Fan::from_rays(2, &[vec![iv(&[1, 0]), iv(&[0, 1])], vec![iv(&[-1, 0]), iv(&[0, -1])]]).unwrap();
        assert!(!opposite.is_complete());
    }

    #[test]
    fn unimodular_fans() {
        assert!(Fan::projective_space(2).unwrap().is_unimodular().unwrap());
        let f = Fan::from_rays(2, &[vec![iv(&[1, 0]), iv(&[1, 2])], vec![iv(&[1, 2]), iv(&[0, 1])]]).unwrap();
        assert!(!f.is_unimodular().unwrap());
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        let err = Fan::from_rays(2, &[vec![iv(&[1, 0]), iv(&[0, 1])], vec![iv(&[1, 1]), iv(&[-1, 1])]]);
        assert!(matches!(err, Err(Error::InvalidFan(_))));
    }

    #[test]
    fn faces_are_generated() {
        let f = Fan::projective_space(2).unwrap();
        let cones = f.cones();
        assert_eq!(cones.len(), 7);
        assert_eq!(cones[0].dim(), 0);
        assert!(f.support_contains(&qvec(&[-5, 3])));
    }
}
