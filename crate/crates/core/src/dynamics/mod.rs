//! Floating-point harness: m-th root pullbacks, Weyl sums, polynomial
//! roots, amoeba sampling, Hausdorff distances, dequantization errors and
//! fitted convergence rates.
//!
//! Throughout, `Log` is the coordinatewise map `z ↦ −log|z|` (see [`log`]).

mod amoeba;
mod convergence;
mod dequant;
mod metrics;
mod roots;

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use amoeba::{amoeba_sample, sample_tropical_support, AmoebaOptions};
pub use convergence::{convergence_report, fit_power_law, ConvergenceReport, Experiment, ExperimentKind};
pub use dequant::{
    dequantization_error, distance_to_hypersurface, log_abs_pullback, DequantizationError, DequantizationOptions,
};
pub use metrics::{directed_hausdorff, hausdorff, star_discrepancy};
pub use roots::{
    empirical_fourier, mth_roots, polynomial_roots, weyl_sum, RootMode, ROOT_BUDGET, ROOT_MAX_ITERATIONS,
    ROOT_RESIDUAL, ROOT_TOLERANCE,
};

/// The valuation map on one coordinate: `Log(z) = −log|z|`.
pub fn log(z: Complex64) -> f64 {
    -z.norm().ln()
}

/// Inverse of [`log`] on the fibre over `x` with argument `phase`.
pub fn from_log(x: f64, phase: f64) -> Complex64 {
    Complex64::from_polar((-x).exp(), phase)
}

/// Real sample points of uniform dimension, with the scale `m` and seed
/// that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub m: Option<u64>,
    pub seed: Option<u64>,
}

impl PointCloud {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter("point cloud coordinates must be finite".into()));
            }
        }
        Ok(PointCloud {
            dim,
            points,
            m: None,
            seed: None,
        })
    }

    pub fn with_meta(mut self, m: Option<u64>, seed: Option<u64>) -> Self {
        self.m = m;
        self.seed = seed;
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the points inside `lo ≤ x ≤ hi`.
    pub fn clip(&self, lo: &[f64], hi: &[f64]) -> PointCloud {
        let points = self
            .points
            .iter()
            .filter(|p| p.iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| *l <= *x && *x <= *h))
            .cloned()
            .collect();
        PointCloud {
            dim: self.dim,
            points,
            m: self.m,
            seed: self.seed,
        }
    }

    /// Every point multiplied by `k`.
    pub fn scaled(&self, k: f64) -> PointCloud {
        PointCloud {
            dim: self.dim,
            points: self.points.iter().map(|p| p.iter().map(|x| x * k).collect()).collect(),
            m: self.m,
            seed: self.seed,
        }
    }

    /// CSV: a `dim,m,seed` header, one line with those values (empty when
    /// absent), then one row per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,m,seed\n");
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", self.dim, opt(self.m), opt(self.seed));
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
        if header.trim() != "dim,m,seed" {
            return Err(Error::Parse(format!("line 1: expected header `dim,m,seed`, found `{header}`")));
        }
        let meta = lines.next().ok_or_else(|| Error::Parse("line 2: missing metadata".into()))?;
        let fields: Vec<&str> = meta.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("line 2: expected 3 fields, found {}", fields.len())));
        }
        let dim: usize = fields[0].parse().map_err(|e| Error::Parse(format!("line 2: dim: {e}")))?;
        let opt = |s: &str, name: &str| -> Result<Option<u64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|e| Error::Parse(format!("line 2: {name}: {e}")))
            }
        };
        let m = opt(fields[1], "m")?;
        let seed = opt(fields[2], "seed")?;
        let mut points = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let p = line
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", i + 3))))
                .collect::<Result<Vec<f64>>>()?;
            points.push(p);
        }
        Ok(PointCloud::new(dim, points)?.with_meta(m, seed))
    }
}

/// Complex sample points of uniform dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexCloud {
    pub dim: usize,
    pub points: Vec<Vec<Complex64>>,
}

impl ComplexCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Image under [`log`], coordinatewise.
    pub fn log_image(&self) -> PointCloud {
        PointCloud {
            dim: self.dim,
            points: self.points.iter().map(|p| p.iter().map(|z| log(*z)).collect()).collect(),
            m: None,
            seed: None,
        }
    }
}

/// An axis-aligned sampling grid with an exclusion radius `delta` around a
/// tropical hypersurface (used by the dequantization harness).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub res: Vec<usize>,
    pub delta: f64,
}

impl GridSpec {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, res: Vec<usize>, delta: f64) -> Result<Self> {
        if lo.len() != hi.len() || lo.len() != res.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: if hi.len() != lo.len() { hi.len() } else { res.len() },
            });
        }
        for i in 0..lo.len() {
            if !(lo[i] < hi[i]) || !lo[i].is_finite() || !hi[i].is_finite() {
                return Err(Error::InvalidParameter(format!("axis {i}: need lo < hi, got [{}, {}]", lo[i], hi[i])));
            }
            if res[i] < 2 {
                return Err(Error::InvalidParameter(format!("axis {i}: resolution must be at least 2")));
            }
        }
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("delta must be nonnegative, got {delta}")));
        }
        Ok(GridSpec { lo, hi, res, delta })
    }

    /// The square grid `[lo, hi]ⁿ` with `res` points per axis.
    pub fn cube(n: usize, lo: f64, hi: f64, res: usize, delta: f64) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n], vec![res; n], delta)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn pitch(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / (self.res[axis] - 1) as f64
    }

    /// Largest pitch over all axes.
    pub fn max_pitch(&self) -> f64 {
        (0..self.dim()).map(|i| self.pitch(i)).fold(0.0, f64::max)
    }

    pub fn axis(&self, axis: usize) -> Vec<f64> {
        let h = self.pitch(axis);
        (0..self.res[axis])
            .map(|k| if k + 1 == self.res[axis] { self.hi[axis] } else { self.lo[axis] + k as f64 * h })
            .collect()
    }

    /// All grid points, last axis varying fastest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = vec![vec![]];
        for i in 0..self.dim() {
            let ax = self.axis(i);
            out = out
                .into_iter()
                .flat_map(|p| {
                    ax.iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(*x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}
