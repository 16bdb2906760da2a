use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::polynomial_roots;
use super::{from_log, log, GridSpec, PointCloud};
use crate::error::{Error, Result};
use crate::lattice::rational::{from_f64, to_f64, Rational};
use crate::polyhedra::WeightedComplex;
use crate::tropical::ComplexPolynomial;

/// Phase sampling of the slicing coordinate in [`amoeba_sample`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmoebaOptions {
    /// Number of equally spaced arguments φ per slice.
    pub phases: usize,
    /// Added to every φ.
    pub phase_offset: f64,
}

impl Default for AmoebaOptions {
    fn default() -> Self {
        AmoebaOptions {
            phases: 64,
            phase_offset: 0.0,
        }
    }
}

/// Samples (1/m)·Log of the zero set of a bivariate `f`.
///
/// For each grid value x on axis `fixed` and each phase φ, sets
/// z_fixed = exp(−m·x + iφ), solves f = 0 in the other variable, and emits
/// (1/m)·Log(z) for each nonzero root. Both variables take a turn as the
/// fixed one. The grid is read in scaled coordinates, so its pitch is the
/// same for every m.
pub fn amoeba_sample(f: &ComplexPolynomial, grid: &GridSpec, m: u64, opts: &AmoebaOptions) -> Result<PointCloud> {
    if f.ambient() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.ambient(),
        });
    }
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: grid.dim(),
        });
    }
    if !f.depends_on(0) || !f.depends_on(1) {
        return Err(Error::InvalidParameter("amoeba sampling needs f to depend on both variables".into()));
    }
    if m == 0 || opts.phases == 0 {
        return Err(Error::InvalidParameter("m and the phase count must be positive".into()));
    }
    let mut points = Vec::new();
    for fixed in 0..2 {
        let solve = 1 - fixed;
        let slices: Vec<Result<Vec<Vec<f64>>>> = grid
            .axis(fixed)
            .par_iter()
            .map(|&x| slice_points(f, fixed, solve, x, m, opts))
            .collect();
        for s in slices {
            points.extend(s?);
        }
    }
    Ok(PointCloud::new(2, points)?.with_meta(Some(m), None))
}

fn slice_points(
    f: &ComplexPolynomial,
    fixed: usize,
    solve: usize,
    x: f64,
    m: u64,
    opts: &AmoebaOptions,
) -> Result<Vec<Vec<f64>>> {
    let mf = m as f64;
    let mut out = Vec::new();
    for k in 0..opts.phases {
        let phi = opts.phase_offset + TAU * k as f64 / opts.phases as f64;
        let mut values = vec![Complex64::new(0.0, 0.0); 2];
        values[fixed] = from_log(mf * x, phi);
        let mut coeffs = f.specialize(solve, &values)?;
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            continue;
        }
        for r in polynomial_roots(&coeffs)? {
            if r == Complex64::new(0.0, 0.0) || !r.re.is_finite() || !r.im.is_finite() {
                continue;
            }
            let mut p = vec![0.0; 2];
            p[fixed] = x;
            p[solve] = log(r) / mf;
            out.push(p);
        }
    }
    Ok(out)
}

/// Points on every cell of `c` inside the box `[lo, hi]`, on a grid of
/// spacing 1/`density` in an orthonormal frame of each cell, plus the
/// vertices of each clipped cell. Weights are ignored.
pub fn sample_tropical_support(c: &WeightedComplex, lo: &[f64], hi: &[f64], density: f64) -> Result<PointCloud> {
    let n = c.ambient();
    if lo.len() != n || hi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if lo.len() != n { lo.len() } else { hi.len() },
        });
    }
    if !(density > 0.0) || !density.is_finite() {
        return Err(Error::InvalidParameter(format!("density must be positive, got {density}")));
    }
    let exact = |v: &[f64]| -> Result<Vec<Rational>> {
        v.iter()
            .map(|x| from_f64(*x).ok_or_else(|| Error::InvalidParameter("box bounds must be finite".into())))
            .collect()
    };
    let (qlo, qhi) = (exact(lo)?, exact(hi)?);
    let step = 1.0 / density;
    let per_cell: Vec<Vec<Vec<f64>>> = c
        .cells()
        .par_iter()
        .map(|(cell, _)| {
            let Some(clipped) = cell.clip_to_box(&qlo, &qhi) else {
                return Vec::new();
            };
            let verts: Vec<Vec<f64>> = clipped.vertices().iter().map(|v| to_f64(v)).collect();
            let mut out = verts.clone();
            let basis = orthonormal_frame(&verts);
            if basis.is_empty() {
                return out;
            }
            let v0 = &verts[0];
            let coords: Vec<Vec<f64>> = verts
                .iter()
                .map(|v| basis.iter().map(|b| b.iter().zip(v.iter().zip(v0)).map(|(bi, (a, o))| bi * (a - o)).sum()).collect())
                .collect();
            let ranges: Vec<(f64, f64)> = (0..basis.len())
                .map(|i| {
                    let lo = coords.iter().map(|c| c[i]).fold(f64::INFINITY, f64::min);
                    let hi = coords.iter().map(|c| c[i]).fold(f64::NEG_INFINITY, f64::max);
                    (lo, hi)
                })
                .collect();
            let mut params: Vec<Vec<f64>> = vec![vec![]];
            for (lo, hi) in &ranges {
                let count = ((hi - lo) / step).floor() as usize;
                params = params
                    .into_iter()
                    .flat_map(|p| {
                        (0..=count).map(move |k| {
                            let mut q = p.clone();
                            q.push(lo + k as f64 * step);
                            q
                        })
                    })
                    .collect();
            }
            for t in params {
                let p: Vec<f64> = (0..n).map(|j| v0[j] + basis.iter().zip(&t).map(|(b, ti)| b[j] * ti).sum::<f64>()).collect();
                if clipped.contains_f64(&p, 1e-9) {
                    out.push(p);
                }
            }
            out
        })
        .collect();
    PointCloud::new(n, per_cell.into_iter().flatten().collect())
}

/// Gram–Schmidt on the differences `vᵢ − v₀`.
fn orthonormal_frame(verts: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in &verts[1..] {
        let mut d: Vec<f64> = v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect();
        for b in &basis {
            let k: f64 = d.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in d.iter_mut().zip(b) {
                *x -= k * y;
            }
        }
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            basis.push(d.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}
