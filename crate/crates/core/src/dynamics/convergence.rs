use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::amoeba::{amoeba_sample, sample_tropical_support, AmoebaOptions};
use super::dequant::{dequantization_error, DequantizationOptions};
use super::metrics::{hausdorff, star_discrepancy};
use super::roots::{mth_roots, RootMode};
use super::GridSpec;
use crate::error::{Error, Result};
use crate::tropical::{tropical_hypersurface, tropicalize_poly, ComplexPolynomial};

/// A named family of finite-m errors.
#[derive(Clone, Debug, PartialEq)]
pub enum Experiment {
    /// Mean |(1/m)·log|f(z^m)| − trop(f)∘Log| over the δ-excluded grid.
    Dequantization {
        f: ComplexPolynomial,
        grid: GridSpec,
        opts: DequantizationOptions,
    },
    /// Hausdorff distance, inside the grid box, between the scaled amoeba of
    /// `f` and a sample of its tropical hypersurface.
    HausdorffToTropical {
        f: ComplexPolynomial,
        grid: GridSpec,
        amoeba: AmoebaOptions,
        density: f64,
    },
    /// Star discrepancy of the normalized arguments of the m-th roots of 1.
    EquidistributionDiscrepancy,
}

/// The experiment names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Dequantization,
    HausdorffToTropical,
    EquidistributionDiscrepancy,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Dequantization => "dequantization",
            ExperimentKind::HausdorffToTropical => "hausdorff-to-tropical",
            ExperimentKind::EquidistributionDiscrepancy => "equidistribution-discrepancy",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dequantization" => Ok(ExperimentKind::Dequantization),
            "hausdorff-to-tropical" => Ok(ExperimentKind::HausdorffToTropical),
            "equidistribution-discrepancy" => Ok(ExperimentKind::EquidistributionDiscrepancy),
            other => Err(Error::UnknownExperiment(other.to_string())),
        }
    }
}

impl Experiment {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Experiment::Dequantization { .. } => ExperimentKind::Dequantization,
            Experiment::HausdorffToTropical { .. } => ExperimentKind::HausdorffToTropical,
            Experiment::EquidistributionDiscrepancy => ExperimentKind::EquidistributionDiscrepancy,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Experiment::Dequantization { opts, .. } => opts.seed,
            _ => 0,
        }
    }

    /// The error at scale `m`.
    pub fn run(&self, m: u64) -> Result<f64> {
        match self {
            Experiment::Dequantization { f, grid, opts } => Ok(dequantization_error(f, m, grid, opts)?.l1),
            Experiment::HausdorffToTropical { f, grid, amoeba, density } => {
                let spine = tropical_hypersurface(&tropicalize_poly(f))?;
                let target = sample_tropical_support(spine.complex(), &grid.lo, &grid.hi, *density)?;
                let cloud = amoeba_sample(f, grid, m, amoeba)?.clip(&grid.lo, &grid.hi);
                hausdorff(&cloud, &target)
            }
            Experiment::EquidistributionDiscrepancy => {
                let roots = mth_roots(&[Complex64::new(1.0, 0.0)], m, RootMode::All)?;
                let u: Vec<f64> = roots
                    .points
                    .iter()
                    .map(|p| {
                        let t = (p[0].arg() / TAU).rem_euclid(1.0);
                        if t >= 1.0 {
                            0.0
                        } else {
                            t
                        }
                    })
                    .collect();
                star_discrepancy(&u)
            }
        }
    }
}

/// Errors at each m with the fitted law error ≈ C·m^(−rho).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub experiment: String,
    pub ms: Vec<u64>,
    pub errors: Vec<f64>,
    #[serde(rename = "C")]
    pub c: f64,
    pub rho: f64,
    pub seed: u64,
}

/// Least squares for ln e = ln C − ρ·ln m. Returns (C, ρ).
pub fn fit_power_law(ms: &[u64], errors: &[f64]) -> Result<(f64, f64)> {
    if ms.len() != errors.len() || ms.len() < 2 {
        return Err(Error::Fit("need at least two (m, error) pairs".into()));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(Error::Fit(format!("error {e} is not positive")));
    }
    let xs: Vec<f64> = ms.iter().map(|m| (*m as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all m are equal".into()));
    }
    let slope = sxy / sxx;
    Ok(((my - slope * mx).exp(), -slope))
}

/// Runs `experiment` at every m (concurrently) and fits a power law.
pub fn convergence_report(experiment: &Experiment, ms: &[u64]) -> Result<ConvergenceReport> {
    if ms.len() < 2 {
        return Err(Error::InvalidParameter("need at least two values of m".into()));
    }
    if ms[0] == 0 || ms.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("ms must be positive and strictly increasing".into()));
    }
    let errors = ms.par_iter().map(|m| experiment.run(*m)).collect::<Result<Vec<f64>>>()?;
    let (c, rho) = fit_power_law(ms, &errors)?;
    Ok(ConvergenceReport {
        experiment: experiment.kind().name().to_string(),
        ms: ms.to_vec(),
        errors,
        c,
        rho,
        seed: experiment.seed(),
    })
}
