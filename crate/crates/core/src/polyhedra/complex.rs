use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::cone::Cone;
use super::polyhedron::{AffineForm, Polyhedron};
use crate::error::{Error, Result};
use crate::lattice::rational::{primitive_int, sub, QVector, Rational};
use crate::lattice::{primitive, saturate_and_complete, IntVector, QuotientLattice};

/// A pure-dimensional weighted rational polyhedral complex, stored by its
/// maximal cells.
///
/// Cells are kept sorted and distinct; duplicate cells have their weights
/// added and zero-weight cells are dropped. Cells sharing an affine span
/// meet along common faces; cells of different spans may meet in a
/// T-junction, which [`WeightedComplex::check_balancing`] accounts for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedComplex {
    ambient: usize,
    dim: usize,
    cells: Vec<(Polyhedron, BigInt)>,
}

/// One failure of the balancing condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// The codimension-one cell τ (or a piece of it, where neighbouring
    /// cells subdivide it differently).
    pub face: Polyhedron,
    /// Canonical representative of Σ w_σ u_{σ/τ} in ℤⁿ/(H_τ∩ℤⁿ).
    pub residual: IntVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancingReport {
    pub balanced: bool,
    pub violations: Vec<Violation>,
}

impl WeightedComplex {
    pub fn new(ambient: usize, dim: usize, cells: Vec<(Polyhedron, BigInt)>) -> Result<Self> {
        let mut merged: BTreeMap<Polyhedron, BigInt> = BTreeMap::new();
        for (c, w) in cells {
            if c.ambient() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: c.ambient(),
                });
            }
            if c.dim() != dim {
                return Err(Error::NonPure {
                    expected: dim,
                    found: c.dim(),
                });
            }
            *merged.entry(c).or_insert_with(BigInt::zero) += w;
        }
        let cells = merged.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(WeightedComplex { ambient, dim, cells })
    }

    pub fn empty(ambient: usize, dim: usize) -> Self {
        WeightedComplex {
            ambient,
            dim,
            cells: Vec::new(),
        }
    }

    /// A weighted fan from `(rays, weight)` pairs.
    pub fn from_cones(ambient: usize, dim: usize, cells: &[(Vec<IntVector>, i64)]) -> Result<Self> {
        let cells = cells
            .iter()
            .map(|(rays, w)| Ok((Cone::from_rays(ambient, rays)?.into_polyhedron(), BigInt::from(*w))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient, dim, cells)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[(Polyhedron, BigInt)] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Whether every cell is a cone with apex at the origin.
    pub fn is_fan(&self) -> bool {
        self.cells.iter().all(|(c, _)| c.is_cone())
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        let cells = self.cells.iter().map(|(c, w)| (c.clone(), w * k)).collect();
        Self::new(self.ambient, self.dim, cells).expect("scaling preserves purity")
    }

    pub fn support_contains(&self, x: &[Rational]) -> bool {
        self.cells.iter().any(|(c, _)| c.contains(x))
    }

    /// Splits every cell crossed by the hyperplane `form = 0`; weights are
    /// inherited.
    pub fn refine_by_hyperplane(&self, form: &AffineForm) -> Self {
        let cells = self
            .cells
            .iter()
            .flat_map(|(c, w)| split(c, form).into_iter().map(move |p| (p, w.clone())))
            .collect();
        Self::new(self.ambient, self.dim, cells).expect("refinement preserves purity")
    }

    /// Evaluates Σ_{σ⊃τ} w_σ·u_{σ/τ} in ℤⁿ/(H_τ∩ℤⁿ) at every codimension-one
    /// cell τ.
    pub fn check_balancing(&self) -> BalancingReport {
        if self.dim == 0 {
            return BalancingReport {
                balanced: true,
                violations: Vec::new(),
            };
        }
        let contributions: Vec<(Polyhedron, BigInt, IntVector)> = self
            .cells
            .par_iter()
            .flat_map_iter(|(sigma, w)| {
                let inner = sigma.relative_interior_point();
                sigma.facets().into_iter().map(move |tau| {
                    let d = primitive_int(&sub(&inner, &tau.relative_interior_point()));
                    (tau, w.clone(), d)
                })
            })
            .collect();

        let mut groups: BTreeMap<(Vec<IntVector>, QVector), Vec<(Polyhedron, BigInt, IntVector)>> = BTreeMap::new();
        for c in contributions {
            groups.entry(c.0.affine_span_key()).or_default().push(c);
        }

        let group_results: Vec<Vec<Violation>> = groups
            .into_par_iter()
            .map(|((span, _), members)| self.balance_group(&span, members))
            .collect();
        let violations: Vec<Violation> = group_results.into_iter().flatten().collect();
        BalancingReport {
            balanced: violations.is_empty(),
            violations,
        }
    }

    fn balance_group(&self, span: &[IntVector], members: Vec<(Polyhedron, BigInt, IntVector)>) -> Vec<Violation> {
        let quotient = saturate_and_complete(self.ambient, span).expect("span vectors have ambient length");
        let mut faces: Vec<Polyhedron> = members.iter().map(|m| m.0.clone()).collect();
        faces.sort();
        faces.dedup();
        let cuts = overlap_cuts(&faces);

        let mut sums: BTreeMap<Polyhedron, IntVector> = BTreeMap::new();
        for (tau, w, d) in members {
            let class = outward_class(&quotient, &d);
            let weighted = class.scale(&w);
            for piece in arrangement_pieces(&tau, &cuts) {
                let entry = sums.entry(piece).or_insert_with(|| IntVector::zero(weighted.dim()));
                *entry = &*entry + &weighted;
            }
        }
        sums.into_iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|(face, s)| Violation {
                face,
                residual: quotient.lift(&s),
            })
            .collect()
    }
}

/// Primitive generator of the image of `direction` in the rank-one lattice
/// (ℤⁿ∩H_σ)/(ℤⁿ∩H_τ), in quotient coordinates.
fn outward_class(quotient: &QuotientLattice, direction: &IntVector) -> IntVector {
    let c = quotient.quotient_coords(direction);
    primitive(&c).expect("direction leaves the face span").0
}

fn split(p: &Polyhedron, form: &AffineForm) -> Vec<Polyhedron> {
    if !p.is_split_by(form) {
        return vec![p.clone()];
    }
    [p.intersect_halfspace(form), p.intersect_halfspace(&form.negated())]
        .into_iter()
        .flatten()
        .filter(|q| q.dim() == p.dim())
        .collect()
}

fn arrangement_pieces(p: &Polyhedron, cuts: &[AffineForm]) -> Vec<Polyhedron> {
    let mut pieces = vec![p.clone()];
    for f in cuts {
        pieces = pieces.iter().flat_map(|q| split(q, f)).collect();
    }
    pieces
}

/// Facet inequalities of all cells that overlap another distinct cell of
/// the same dimension and span; empty when the cells already meet along
/// faces.
fn overlap_cuts(cells: &[Polyhedron]) -> Vec<AffineForm> {
    let mut involved = vec![false; cells.len()];
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if let Some(m) = cells[i].intersect(&cells[j]) {
                if m.dim() == cells[i].dim() {
                    involved[i] = true;
                    involved[j] = true;
                }
            }
        }
    }
    let mut cuts: Vec<AffineForm> = cells
        .iter()
        .zip(&involved)
        .filter(|(_, inv)| **inv)
        .flat_map(|(c, _)| c.inequalities().to_vec())
        .collect();
    cuts.sort();
    cuts.dedup();
    cuts
}

/// Adds two weighted complexes of the same dimension on a common
/// refinement; weights of overlapping pieces add and cancelled pieces are
/// dropped.
pub fn add_cycles(a: &WeightedComplex, b: &WeightedComplex) -> Result<WeightedComplex> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch {
            expected: a.ambient,
            found: b.ambient,
        });
    }
    if a.dim != b.dim {
        return Err(Error::NonPure {
            expected: a.dim,
            found: b.dim,
        });
    }
    let mut groups: BTreeMap<(Vec<IntVector>, QVector), Vec<(Polyhedron, BigInt)>> = BTreeMap::new();
    for (c, w) in a.cells.iter().chain(&b.cells) {
        groups.entry(c.affine_span_key()).or_default().push((c.clone(), w.clone()));
    }
    let refined: Vec<Vec<(Polyhedron, BigInt)>> = groups
        .into_par_iter()
        .map(|(_, members)| {
            let mut distinct: Vec<Polyhedron> = members.iter().map(|m| m.0.clone()).collect();
            distinct.sort();
            distinct.dedup();
            let cuts = overlap_cuts(&distinct);
            members
                .into_iter()
                .flat_map(|(c, w)| arrangement_pieces(&c, &cuts).into_iter().map(move |p| (p, w.clone())))
                .collect()
        })
        .collect();
    WeightedComplex::new(a.ambient, a.dim, refined.into_iter().flatten().collect())
}

/// Representative of the outward primitive generator of
/// (ℤⁿ∩H_σ)/(ℤⁿ∩H_τ) for a codimension-one face τ of σ, pointing from H_τ
/// into σ. Only its class modulo H_τ∩ℤⁿ is meaningful.
pub fn outward_generator(tau: &Cone, sigma: &Cone) -> Result<IntVector> {
    outward_generator_of(tau.polyhedron(), sigma.polyhedron())
}

pub fn outward_generator_of(tau: &Polyhedron, sigma: &Polyhedron) -> Result<IntVector> {
    if tau.dim() + 1 != sigma.dim() || !tau.is_face_of(sigma) {
        return Err(Error::NotAFace(format!("{tau:?} is not a codimension-one face of {sigma:?}")));
    }
    let q = saturate_and_complete(tau.ambient(), &tau.linear_span())?;
    let d = primitive_int(&sub(&sigma.relative_interior_point(), &tau.relative_interior_point()));
    Ok(q.lift(&outward_class(&q, &d)))
}
