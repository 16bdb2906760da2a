//! Toric combinatorics: the cone–orbit correspondence, distinguished points
//! and the action of z ↦ z^m on orbits.
//!
//! The orbit of a cone σ is the torus T_{N(σ)} with N(σ) = ℤⁿ/(H_σ∩ℤⁿ).
//! Orbit points are written in the coordinates given by the complement
//! basis of [`QuotientLattice`].

use num_complex::Complex64;

use crate::dynamics::{mth_roots, RootMode};
use crate::error::{Error, Result};
use crate::lattice::{saturate_and_complete, IntVector, QuotientLattice};
use crate::polyhedra::{Cone, Fan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub cone: Cone,
    pub quotient: QuotientLattice,
    /// n − dim σ
    pub dim: usize,
}

impl Orbit {
    pub fn of_cone(cone: &Cone) -> Result<Orbit> {
        let quotient = saturate_and_complete(cone.ambient(), &cone.span_vectors())?;
        let dim = quotient.quotient_rank();
        debug_assert_eq!(dim + cone.dim(), cone.ambient());
        Ok(Orbit {
            cone: cone.clone(),
            quotient,
            dim,
        })
    }

    /// The distinguished point z_σ, which is (1, …, 1) in orbit coordinates.
    pub fn distinguished(&self) -> OrbitPoint {
        OrbitPoint {
            coords: vec![Complex64::new(1.0, 0.0); self.dim],
        }
    }
}

/// A point t·z_σ of an orbit, t ∈ T_{N(σ)}.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPoint {
    pub coords: Vec<Complex64>,
}

impl OrbitPoint {
    pub fn new(orbit: &Orbit, coords: Vec<Complex64>) -> Result<Self> {
        if coords.len() != orbit.dim {
            return Err(Error::DimensionMismatch {
                expected: orbit.dim,
                found: coords.len(),
            });
        }
        if let Some(i) = coords.iter().position(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(Error::ZeroComponent(i));
        }
        Ok(OrbitPoint { coords })
    }
}

/// One orbit per cone of `fan`, in the order of [`Fan::cones`].
pub fn orbits(fan: &Fan) -> Result<Vec<Orbit>> {
    fan.cones().iter().map(Orbit::of_cone).collect()
}

/// The semigroup homomorphism of z_σ on each probe u ∈ σ^∨∩M: 1 if u ∈ σ^⊥,
/// else 0.
pub fn distinguished_point(sigma: &Cone, probes: &[IntVector]) -> Result<Vec<u8>> {
    probes
        .iter()
        .map(|u| {
            if u.dim() != sigma.ambient() {
                return Err(Error::DimensionMismatch {
                    expected: sigma.ambient(),
                    found: u.dim(),
                });
            }
            if !sigma.dual_contains(u) {
                return Err(Error::ProbeOutsideDual(u.to_string()));
            }
            Ok(u8::from(sigma.perp_contains(u)))
        })
        .collect()
}

/// t·z_σ ↦ t^m·z_σ.
pub fn phi_m_orbit(orbit: &Orbit, m: u64, z: &OrbitPoint) -> Result<OrbitPoint> {
    check_m(m)?;
    let coords = z.coords.iter().map(|c| pow_m(*c, m)).collect();
    OrbitPoint::new(orbit, coords)
}

/// All m^{n − dim σ} points of the orbit mapped to `z`, ordered by branch
/// index coordinate by coordinate.
pub fn preimages(orbit: &Orbit, m: u64, z: &OrbitPoint) -> Result<Vec<OrbitPoint>> {
    check_m(m)?;
    if z.coords.len() != orbit.dim {
        return Err(Error::DimensionMismatch {
            expected: orbit.dim,
            found: z.coords.len(),
        });
    }
    let cloud = mth_roots(&z.coords, m, RootMode::All)?;
    Ok(cloud.points.into_iter().map(|coords| OrbitPoint { coords }).collect())
}

fn pow_m(c: Complex64, m: u64) -> Complex64 {
    match u32::try_from(m) {
        Ok(k) => c.powu(k),
        Err(_) => Complex64::from_polar(c.norm().powf(m as f64), c.arg() * m as f64),
    }
}

fn check_m(m: u64) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    Ok(())
}
