//! Exact rational cones, fans and weighted complexes, with the balancing
//! check and common refinements.

mod complex;
mod cone;
mod enumerate;
mod fan;
mod polyhedron;

pub use complex::{add_cycles, outward_generator, outward_generator_of, BalancingReport, Violation, WeightedComplex};
pub use cone::{dual_description, Cone};
pub use fan::{common_refinement, Fan};
pub use polyhedron::{AffineForm, HalfSpaces, Polyhedron};


/// Largest ambient dimension accepted by cone construction and refinement.
pub const MAX_AMBIENT: usize = 4;

/// Balancing verdict for a weighted complex.
pub fn check_balancing(c: &WeightedComplex) -> BalancingReport {
    c.check_balancing()
}

/// Unimodularity of a single pointed cone.
pub fn is_unimodular(c: &Cone) -> crate::Result<bool> {
    c.is_unimodular()
}

pub fn is_complete(f: &Fan) -> bool {
    f.is_complete()
}
