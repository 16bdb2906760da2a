use rayon::prelude::*;

use super::PointCloud;
use crate::error::{Error, Result};

fn check_pair(a: &PointCloud, b: &PointCloud) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(())
}

fn dist2(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Squared distance from `p` to the nearest point of `sorted`, which is
/// ordered by first coordinate. Scans outward from `p`'s position and stops
/// once the first-coordinate gap alone exceeds the best distance.
fn nearest2(p: &[f64], sorted: &[&[f64]]) -> f64 {
    let start = sorted.partition_point(|q| q[0] < p[0]);
    let mut best = f64::INFINITY;
    for q in &sorted[start..] {
        let dx = q[0] - p[0];
        if dx * dx > best {
            break;
        }
        best = best.min(dist2(p, q));
    }
    for q in sorted[..start].iter().rev() {
        let dx = p[0] - q[0];
        if dx * dx > best {
            break;
        }
        best = best.min(dist2(p, q));
    }
    best
}

/// sup_{a∈A} min_{b∈B} |a − b|.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    check_pair(a, b)?;
    if a.dim == 0 {
        return Ok(0.0);
    }
    let mut sorted: Vec<&[f64]> = b.points.iter().map(Vec::as_slice).collect();
    sorted.sort_by(|p, q| p[0].total_cmp(&q[0]));
    let worst = a
        .points
        .par_iter()
        .map(|p| nearest2(p, &sorted))
        .reduce(|| 0.0, f64::max);
    Ok(worst.sqrt())
}

/// max of the two directed distances.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Star discrepancy sup_t |#{uᵢ < t}/N − t| of points in [0, 1).
pub fn star_discrepancy(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if values.iter().any(|u| !(0.0..1.0).contains(u)) {
        return Err(Error::InvalidParameter("star discrepancy needs points in [0, 1)".into()));
    }
    let mut u = values.to_vec();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    Ok(u
        .iter()
        .enumerate()
        .map(|(i, x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max))
}
