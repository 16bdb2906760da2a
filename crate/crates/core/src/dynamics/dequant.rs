use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GridSpec;
use crate::error::{Error, Result};
use crate::lattice::IntVector;
use crate::tropical::{tropicalize_poly, ComplexPolynomial, TropicalPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DequantizationOptions {
    pub seed: u64,
    /// Draw uniform phases θ ∈ [0, 2π)ⁿ per sample; otherwise θ = 0.
    pub random_phases: bool,
    /// Total number of phase redraws allowed when f(z^m) vanishes.
    pub max_retries: usize,
}

impl Default for DequantizationOptions {
    fn default() -> Self {
        DequantizationOptions {
            seed: 0,
            random_phases: true,
            max_retries: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DequantizationError {
    pub l_inf: f64,
    /// Mean absolute error over the retained samples.
    pub l1: f64,
    pub samples: usize,
    pub retries: usize,
    pub seed: u64,
}

fn exponents_f64(e: &IntVector) -> Vec<f64> {
    e.0.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect()
}

/// (1/m)·log|f(z^m)| at zⱼ = exp(−xⱼ + iθⱼ), computed by factoring out the
/// largest term. Returns `None` when the sum cancels to within rounding.
pub fn log_abs_pullback(f: &ComplexPolynomial, x: &[f64], theta: &[f64], m: u64) -> Result<Option<f64>> {
    let n = f.ambient();
    if x.len() != n || theta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if x.len() != n { x.len() } else { theta.len() },
        });
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let mf = m as f64;
    let terms: Vec<(f64, f64)> = f
        .terms()
        .map(|(e, c)| {
            let a = exponents_f64(e);
            let dx: f64 = a.iter().zip(x).map(|(ai, xi)| ai * xi).sum();
            let dt: f64 = a.iter().zip(theta).map(|(ai, ti)| ai * ti).sum();
            (c.norm().ln() - mf * dx, c.arg() + mf * dt)
        })
        .collect();
    let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (logmod, phase) in &terms {
        let r = (logmod - top).exp();
        sum += Complex64::from_polar(r, *phase);
        scale += r;
    }
    if sum.norm() <= 4.0 * f64::EPSILON * scale {
        return Ok(None);
    }
    Ok(Some((top + sum.norm().ln()) / mf))
}

/// Lower bound for the Euclidean distance from `x` to the corner locus of
/// `q`: if term i is the unique maximum, min over other exponents αₖ of
/// (Lᵢ(x) − Lₖ(x)) / |αᵢ − αₖ|. Zero on the corner locus, +∞ for a
/// single-term polynomial.
pub fn distance_to_hypersurface(q: &TropicalPolynomial, x: &[f64]) -> Result<f64> {
    let eval = q.eval(x)?;
    if eval.argmax.len() > 1 {
        return Ok(0.0);
    }
    let best = &eval.argmax[0];
    let a_best = exponents_f64(best);
    let vals = q.term_values(x);
    let mut d = f64::INFINITY;
    for ((e, _), v) in q.terms().zip(&vals) {
        if e == best {
            continue;
        }
        let a = exponents_f64(e);
        let norm = a_best.iter().zip(&a).map(|(p, r)| (p - r) * (p - r)).sum::<f64>().sqrt();
        d = d.min((eval.value - v) / norm);
    }
    Ok(d)
}

/// Sup and mean of |(1/m)·log|f(z^m)| − trop(f)(x)| over the grid points at
/// distance at least `grid.delta` from the tropical hypersurface, with
/// zⱼ = exp(−xⱼ + iθⱼ).
///
/// Sample i draws its phases from stream i of a ChaCha8 generator seeded
/// with `opts.seed`, so the result does not depend on scheduling.
pub fn dequantization_error(
    f: &ComplexPolynomial,
    m: u64,
    grid: &GridSpec,
    opts: &DequantizationOptions,
) -> Result<DequantizationError> {
    let n = f.ambient();
    if grid.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: grid.dim(),
        });
    }
    if !(grid.delta > 0.0) {
        return Err(Error::InvalidParameter("dequantization grids need delta > 0".into()));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let q = tropicalize_poly(f);
    let mut kept = Vec::new();
    for x in grid.points() {
        if distance_to_hypersurface(&q, &x)? >= grid.delta {
            kept.push(x);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let per_point: Vec<Result<(f64, usize)>> = kept
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let target = q.eval(x)?.value;
            let mut retries = 0;
            loop {
                let theta: Vec<f64> = if opts.random_phases {
                    (0..n).map(|_| rng.random_range(0.0..TAU)).collect()
                } else {
                    vec![0.0; n]
                };
                if let Some(v) = log_abs_pullback(f, x, &theta, m)? {
                    return Ok(((v - target).abs(), retries));
                }
                retries += 1;
                if !opts.random_phases || retries > opts.max_retries {
                    return Err(Error::RetryBudgetExhausted { retries });
                }
            }
        })
        .collect();
    let mut l_inf: f64 = 0.0;
    let mut total = 0.0;
    let mut retries = 0;
    for r in per_point {
        let (e, k) = r?;
        l_inf = l_inf.max(e);
        total += e;
        retries += k;
        if retries > opts.max_retries {
            return Err(Error::RetryBudgetExhausted { retries });
        }
    }
    Ok(DequantizationError {
        l_inf,
        l1: total / kept.len() as f64,
        samples: kept.len(),
        retries,
        seed: opts.seed,
    })
}
