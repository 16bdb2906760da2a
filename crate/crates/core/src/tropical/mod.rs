//! Max-plus algebra, tropical and complex polynomials, tropicalisation,
//! tropical hypersurfaces, Bergman fans of uniform matroids and fiber
//! binomials.

mod bergman;
mod hypersurface;
mod number;
mod polynomial;

pub use bergman::{fiber_binomial, uniform_bergman_fan};
pub use hypersurface::{tropical_hypersurface, TropicalCycle, MAX_HYPERSURFACE_AMBIENT};
pub use number::{dequantized_sum, TropicalNumber};
pub use polynomial::{eval_tropical, tropicalize_poly, ComplexPolynomial, TropicalEval, TropicalPolynomial, TIE_TOLERANCE};
