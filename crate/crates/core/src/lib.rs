//! Exact tropical-geometry core with a floating-point dynamics harness.
//!
//! The exact half (`lattice`, `polyhedra`, `tropical`, `toric`) works over
//! arbitrary-precision integers and rationals. The numerical half
//! (`dynamics`) samples m-th root pullbacks, amoebas and dequantized
//! logarithms and measures how they approach their tropical limits.

pub mod dynamics;
pub mod error;
pub mod io;
pub mod lattice;
pub mod polyhedra;
pub mod toric;
pub mod tropical;

pub use error::{Error, Result};
pub use lattice::{IntMatrix, IntVector, QuotientLattice, SmithDecomposition};
pub use polyhedra::{BalancingReport, Cone, Fan, Polyhedron, WeightedComplex};
pub use tropical::{ComplexPolynomial, TropicalCycle, TropicalNumber, TropicalPolynomial};

