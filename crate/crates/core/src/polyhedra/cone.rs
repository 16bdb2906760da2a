use num_bigint::BigInt;
use num_traits::Zero;

use super::polyhedron::{AffineForm, Polyhedron};
use super::MAX_AMBIENT;
use crate::error::{Error, Result};
use crate::lattice::rational::{QVector, Rational};
use crate::lattice::{smith_normal_form, IntMatrix, IntVector};

/// A rational polyhedral cone with apex at the origin.
///
/// Stored as a [`Polyhedron`] whose only vertex is the origin, so both the
/// generator and the inequality description are available; the latter is
/// computed on first use and cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(Polyhedron);

/// Builds the cone generated by `generators` and computes its facet
/// description.
pub fn dual_description(ambient: usize, generators: &[IntVector]) -> Result<Cone> {
    Cone::from_rays(ambient, generators)
}

impl Cone {
    pub fn from_rays(ambient: usize, generators: &[IntVector]) -> Result<Cone> {
        check_ambient(ambient)?;
        for g in generators {
            if g.dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: g.dim(),
                });
            }
        }
        let cone = Cone(Polyhedron::cone(ambient, generators));
        // Both descriptions are materialized up front.
        cone.0.hrep();
        Ok(cone)
    }

    /// `{x : eq·x = 0 for eq in equations, ineq·x ≥ 0 for ineq in inequalities}`
    pub fn from_inequalities(ambient: usize, equations: &[IntVector], inequalities: &[IntVector]) -> Result<Cone> {
        check_ambient(ambient)?;
        let eqs: Vec<AffineForm> = equations.iter().cloned().map(AffineForm::linear).collect();
        let ineqs: Vec<AffineForm> = inequalities.iter().cloned().map(AffineForm::linear).collect();
        let p = Polyhedron::from_constraints(ambient, &eqs, &ineqs).expect("cones contain the origin");
        Ok(Cone(p))
    }

    pub fn zero(ambient: usize) -> Cone {
        Cone(Polyhedron::cone(ambient, &[]))
    }

    pub fn from_polyhedron(p: Polyhedron) -> Result<Cone> {
        if p.is_cone() {
            Ok(Cone(p))
        } else {
            Err(Error::InvalidParameter("polyhedron is not a cone with apex at the origin".into()))
        }
    }

    pub fn polyhedron(&self) -> &Polyhedron {
        &self.0
    }

    pub fn into_polyhedron(self) -> Polyhedron {
        self.0
    }

    pub fn ambient(&self) -> usize {
        self.0.ambient()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Primitive extreme rays of the pointed part.
    pub fn rays(&self) -> &[IntVector] {
        self.0.rays()
    }

    pub fn lineality(&self) -> &[IntVector] {
        self.0.lineality()
    }

    pub fn is_pointed(&self) -> bool {
        self.0.is_pointed()
    }

    /// Rays followed by ± each lineality generator; generates the cone.
    pub fn generators(&self) -> Vec<IntVector> {
        let mut g = self.rays().to_vec();
        for l in self.lineality() {
            g.push(l.clone());
            g.push(-l);
        }
        g
    }

    /// Equations of the linear span.
    pub fn equations(&self) -> Vec<IntVector> {
        self.0.equations().iter().map(|f| f.normal.clone()).collect()
    }

    /// Primitive facet normals `a` with `a · x ≥ 0` on the cone.
    pub fn facet_normals(&self) -> Vec<IntVector> {
        self.0.inequalities().iter().map(|f| f.normal.clone()).collect()
    }

    /// The full inequality description: facet normals, then each equation
    /// as a pair of opposite inequalities.
    pub fn inequalities(&self) -> Vec<IntVector> {
        let mut out = self.facet_normals();
        for e in self.equations() {
            out.push(e.clone());
            out.push(-&e);
        }
        out
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.0.contains(x)
    }

    pub fn contains_int(&self, x: &IntVector) -> bool {
        self.0.contains(&x.to_rational())
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        Cone(self.0.intersect(&other.0).expect("cones share the origin"))
    }

    pub fn faces(&self) -> Vec<Cone> {
        self.0.faces().into_iter().map(Cone).collect()
    }

    pub fn facets(&self) -> Vec<Cone> {
        self.0.facets().into_iter().map(Cone).collect()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.is_face_of(&other.0)
    }

    /// A point in the relative interior (sum of the extreme rays).
    pub fn interior_point(&self) -> QVector {
        self.0.relative_interior_point()
    }

    /// Whether the rays extend to a ℤ-basis of ℤⁿ. Errors on non-pointed
    /// cones.
    pub fn is_unimodular(&self) -> Result<bool> {
        if !self.is_pointed() {
            return Err(Error::NotPointed(self.lineality().len()));
        }
        if self.rays().is_empty() {
            return Ok(true);
        }
        if self.rays().len() != self.dim() {
            return Ok(false);
        }
        let m = IntMatrix::from_rows(self.ambient(), self.rays())?;
        let s = smith_normal_form(&m);
        Ok(s.invariant_factors().iter().all(|d| *d == BigInt::from(1)))
    }

    /// Whether the integer vector `u` lies in the dual cone σ^∨.
    pub fn dual_contains(&self, u: &IntVector) -> bool {
        self.rays().iter().all(|r| u.dot(r) >= BigInt::zero())
            && self.lineality().iter().all(|l| u.dot(l).is_zero())
    }

    /// Whether `u` lies in σ^⊥.
    pub fn perp_contains(&self, u: &IntVector) -> bool {
        self.rays().iter().chain(self.lineality()).all(|r| u.dot(r).is_zero())
    }

    /// Canonical integer spanning set of the linear span.
    pub fn span_vectors(&self) -> Vec<IntVector> {
        self.0.linear_span()
    }
}

fn check_ambient(ambient: usize) -> Result<()> {
    if ambient > MAX_AMBIENT {
        return Err(Error::UnsupportedDimension {
            found: ambient,
            max: MAX_AMBIENT,
        });
    }
    Ok(())
}

/// Rational test points `(a/den)` in `[-r, r]ⁿ` used by membership
/// agreement checks.
#[cfg(test)]
pub(crate) fn grid_points(n: usize, r: i64, den: i64) -> Vec<QVector> {
    let vals: Vec<Rational> = (-r * den..=r * den)
        .map(|k| Rational::new(k.into(), den.into()))
        .collect();
    let mut out: Vec<QVector> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut p = p.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::{self, qvec};

    fn iv(c: &[i64]) -> IntVector {
        IntVector::from_i64(c)
    }

    /// Membership via the generator side: x ∈ cone iff some nonnegative
    /// combination hits it. For the 2-d test cones below this is decided by
    /// checking all pairs of generators (Carathéodory).
    fn in_cone_by_generators(gens: &[IntVector], x: &QVector) -> bool {
        use crate::lattice::rational::solve_unique;
        use num_traits::Signed;
        if rational::is_zero(x) {
            return true;
        }
        let g: Vec<QVector> = gens.iter().map(IntVector::to_rational).collect();
        for a in &g {
            // x = t a
            let i = a.iter().position(|c| !c.is_zero()).unwrap();
            let t = &x[i] / &a[i];
            if !t.is_negative() && rational::scale(a, &t) == *x {
                return true;
            }
        }
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let rows = vec![vec![g[i][0].clone(), g[j][0].clone()], vec![g[i][1].clone(), g[j][1].clone()]];
                if let Some(c) = solve_unique(&rows, x, 2) {
                    if c.iter().all(|v| !v.is_negative()) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn quadrant() {
        let c = dual_description(2, &[iv(&[1, 0]), iv(&[0, 1])]).unwrap();
        let mut ineqs = c.inequalities();
        ineqs.sort();
        assert_eq!(ineqs, vec![iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn skew_cone_descriptions_agree() {
        let gens = [iv(&[1, 0]), iv(&[1, 2])];
        let c = dual_description(2, &gens).unwrap();
        let mut ineqs = c.inequalities();
        ineqs.sort();
        assert_eq!(ineqs, vec![iv(&[0, 1]), iv(&[2, -1])]);
        for x in grid_points(2, 2, 2) {
            assert_eq!(c.contains(&x), in_cone_by_generators(&gens, &x), "{x:?}");
        }
    }

    #[test]
    fn line_has_lineality() {
        let c = dual_description(2, &[iv(&[1, 1]), iv(&[-1, -1])]).unwrap();
        assert_eq!(c.lineality(), &[iv(&[1, 1])]);
        assert!(c.rays().is_empty());
        assert!(c.facet_normals().is_empty());
        let ineqs = c.inequalities();
        assert_eq!(ineqs.len(), 2);
        assert_eq!(ineqs[0], -&ineqs[1]);
        assert_eq!(primitive_abs(&ineqs[0]), iv(&[1, -1]));
        assert!(c.contains(&qvec(&[-3, -3])));
        assert!(!c.contains(&qvec(&[1, 0])));
    }

    fn primitive_abs(v: &IntVector) -> IntVector {
        if v.0[0] < BigInt::zero() {
            -v
        } else {
            v.clone()
        }
    }

    #[test]
    fn ambient_dimension_is_capped() {
        assert_eq!(
            dual_description(5, &[IntVector::unit(5, 0)]),
            Err(Error::UnsupportedDimension { found: 5, max: 4 })
        );
    }

    #[test]
    fn unimodularity() {
        assert!(Cone::from_rays(2, &[iv(&[1, 0]), iv(&[0, 1])]).unwrap().is_unimodular().unwrap());
        assert!(!Cone::from_rays(2, &[iv(&[1, 0]), iv(&[1, 2])]).unwrap().is_unimodular().unwrap());
        assert!(Cone::from_rays(2, &[iv(&[1, 0]), iv(&[-1, 0])]).unwrap().is_unimodular().is_err());
        assert!(Cone::from_rays(3, &[iv(&[1, 0, 0]), iv(&[0, 1, 0]), iv(&[1, 1, 1])]).unwrap().is_unimodular().unwrap());
    }

    #[test]
    fn inequality_round_trip() {
        let c = Cone::from_rays(3, &[iv(&[1, 0, 0]), iv(&[0, 1, 0]), iv(&[1, 1, 2]), iv(&[1, 1, 1])]).unwrap();
        let back = Cone::from_inequalities(3, &c.equations(), &c.facet_normals()).unwrap();
        assert_eq!(c, back);
        assert_eq!(c.rays().len(), 3);
    }
}
