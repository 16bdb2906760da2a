use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ComplexCloud;
use crate::error::{Error, Result};

/// Most points [`mth_roots`] will enumerate in [`RootMode::All`].
pub const ROOT_BUDGET: u128 = 1_000_000;
/// Step-size tolerance of the root finder, relative to `1 + |z|`.
pub const ROOT_TOLERANCE: f64 = 1e-12;
pub const ROOT_MAX_ITERATIONS: usize = 200;
/// Largest accepted backward error `|p(r)| / Σ|aₖ||r|ᵏ`.
pub const ROOT_RESIDUAL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMode {
    /// All mⁿ combinations of componentwise roots.
    All,
    /// `count` independent uniform choices.
    Sampled { count: usize, seed: u64 },
}

/// The m-th roots of one nonzero complex number, ordered by branch index.
fn scalar_roots(a: Complex64, m: u64) -> Vec<Complex64> {
    let r = a.norm().powf(1.0 / m as f64);
    let theta = a.arg();
    (0..m)
        .map(|l| Complex64::from_polar(r, (theta + TAU * l as f64) / m as f64))
        .collect()
}

/// Componentwise m-th roots of `a`: the fibre of z ↦ z^m over `a`.
pub fn mth_roots(a: &[Complex64], m: u64, mode: RootMode) -> Result<ComplexCloud> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    if let Some(i) = a.iter().position(|z| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroComponent(i));
    }
    let n = a.len();
    let per: Vec<Vec<Complex64>> = a.iter().map(|z| scalar_roots(*z, m)).collect();
    let points = match mode {
        RootMode::All => {
            let requested = u128::from(m).checked_pow(n as u32).unwrap_or(u128::MAX);
            if requested > ROOT_BUDGET {
                return Err(Error::BudgetExceeded {
                    requested,
                    limit: ROOT_BUDGET,
                });
            }
            let mut out: Vec<Vec<Complex64>> = vec![vec![]];
            for roots in &per {
                out = out
                    .into_iter()
                    .flat_map(|p| {
                        roots.iter().map(move |z| {
                            let mut q = p.clone();
                            q.push(*z);
                            q
                        })
                    })
                    .collect();
            }
            out
        }
        RootMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| per.iter().map(|roots| roots[rng.random_range(0..roots.len())]).collect())
                .collect()
        }
    };
    Ok(ComplexCloud { dim: n, points })
}

/// Π_j Σ_{ℓ=0}^{m−1} ζ^{ℓνⱼ} with ζ = e^{2πi/m}, in closed form: each factor
/// is m when m | νⱼ and 0 otherwise.
pub fn weyl_sum(m: u64, nu: &[i64]) -> Complex64 {
    let m_i = m as i128;
    if nu.iter().any(|v| i128::from(*v) % m_i != 0) {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new((m as f64).powi(nu.len() as i32), 0.0)
}

/// (1/N) Σ exp(−i⟨ν, θ⟩) over the arguments θ of the points.
pub fn empirical_fourier(points: &ComplexCloud, nu: &[i64]) -> Result<Complex64> {
    if nu.len() != points.dim {
        return Err(Error::DimensionMismatch {
            expected: points.dim,
            found: nu.len(),
        });
    }
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let sum: Complex64 = points
        .points
        .iter()
        .map(|p| {
            let phase: f64 = p.iter().zip(nu).map(|(z, v)| z.arg() * *v as f64).sum();
            Complex64::from_polar(1.0, -phase)
        })
        .sum();
    Ok(sum / points.len() as f64)
}

/// p(z) and p'(z)/p(z) style Newton correction for `coeffs` (lowest degree
/// first), evaluated through the reversed polynomial when |z| > 1.
/// Returns (Newton step p/p', backward error).
fn newton_step(coeffs: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let n = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let (mut p, mut dp, mut scale) = (coeffs[n], Complex64::new(0.0, 0.0), coeffs[n].norm());
        let az = z.norm();
        for k in (0..n).rev() {
            dp = dp * z + p;
            p = p * z + coeffs[k];
            scale = scale * az + coeffs[k].norm();
        }
        (p / dp, p.norm() / scale)
    } else {
        // p(z) = zⁿ q(w), w = 1/z, q(w) = Σ a_{n−i} wⁱ
        let w = z.inv();
        let aw = w.norm();
        let (mut q, mut dq, mut scale) = (coeffs[0], Complex64::new(0.0, 0.0), coeffs[0].norm());
        for k in 1..=n {
            dq = dq * w + q;
            q = q * w + coeffs[k];
            scale = scale * aw + coeffs[k].norm();
        }
        let step = (w * (n as f64 - w * dq / q)).inv();
        (step, q.norm() / scale)
    }
}

/// All roots of the univariate polynomial with coefficients `coeffs`
/// (lowest degree first), with multiplicity, by Aberth–Ehrlich iteration.
///
/// Exact zero roots (vanishing low coefficients) are split off first. On
/// failure the error carries the last iterates.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0));
    let degree = match degree {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidParameter("polynomial must have degree at least 1".into())),
    };
    if coeffs.len() != degree + 1 {
        return Err(Error::InvalidParameter("leading coefficient is zero".into()));
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidParameter("coefficients must be finite".into()));
    }
    let zeros = coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0)).expect("nonzero leading term");
    let reduced = &coeffs[zeros..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let n = reduced.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-reduced[0] / reduced[1]);
        return Ok(roots);
    }

    let lead = reduced[n];
    let radius = 1.0 + reduced[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut converged = vec![false; n];
    let mut iterations = 0;
    while iterations < ROOT_MAX_ITERATIONS && converged.iter().any(|c| !c) {
        iterations += 1;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (ratio, backward) = newton_step(reduced, z[k]);
            if backward == 0.0 || !ratio.re.is_finite() || !ratio.im.is_finite() {
                converged[k] = true;
                continue;
            }
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[k] -= w;
            if w.norm() <= ROOT_TOLERANCE * (1.0 + z[k].norm()) {
                converged[k] = true;
            }
        }
    }
    let accurate = z.iter().all(|r| r.re.is_finite() && r.im.is_finite() && newton_step(reduced, *r).1 <= ROOT_RESIDUAL);
    if !accurate {
        return Err(Error::NoConvergence { iterations, partial: z });
    }
    roots.extend(z);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close_multiset(mut a: Vec<Complex64>, mut b: Vec<Complex64>, tol: f64) -> bool {
        if a.len() != b.len() {
            return false;
        }
        while let Some(x) = a.pop() {
            let (i, d) = b
                .iter()
                .enumerate()
                .map(|(i, y)| (i, (x - y).norm()))
                .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
                .unwrap();
            if d > tol {
                return false;
            }
            b.swap_remove(i);
        }
        true
    }

    #[test]
    fn roots_of_unity() {
        let r = mth_roots(&[c(1.0, 0.0)], 4, RootMode::All).unwrap();
        let flat: Vec<Complex64> = r.points.iter().map(|p| p[0]).collect();
        assert!(close_multiset(flat, vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)], 1e-15));

        let r = mth_roots(&[c(8.0, 0.0)], 3, RootMode::All).unwrap();
        assert_eq!(r.len(), 3);
        for p in &r.points {
            assert!((p[0].norm() - 2.0).abs() < 1e-14);
            assert!((p[0].powu(3) - c(8.0, 0.0)).norm() < 1e-12);
        }

        assert_eq!(mth_roots(&[c(1.0, 0.0), c(1.0, 0.0)], 2, RootMode::All).unwrap().len(), 4);
    }

    #[test]
    fn root_errors_and_sampling() {
        assert_eq!(mth_roots(&[c(1.0, 0.0), c(0.0, 0.0)], 2, RootMode::All), Err(Error::ZeroComponent(1)));
        assert!(matches!(
            mth_roots(&[c(1.0, 0.0); 3], 101, RootMode::All),
            Err(Error::BudgetExceeded { requested: 1_030_301, limit: 1_000_000 })
        ));
        let s = mth_roots(&[c(1.0, 0.0); 3], 101, RootMode::Sampled { count: 50, seed: 3 }).unwrap();
        assert_eq!(s.len(), 50);
        assert_eq!(s, mth_roots(&[c(1.0, 0.0); 3], 101, RootMode::Sampled { count: 50, seed: 3 }).unwrap());
        for p in &s.points {
            for z in p {
                assert!((z.powu(101) - c(1.0, 0.0)).norm() < 1e-12);
            }
        }
        assert!(mth_roots(&[c(1.0, 0.0)], 0, RootMode::All).is_err());
    }

    fn weyl_brute(m: u64, nu: &[i64]) -> Complex64 {
        nu.iter()
            .map(|v| (0..m).map(|l| Complex64::from_polar(1.0, TAU * (l as f64) * (*v as f64) / m as f64)).sum::<Complex64>())
            .product()
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(weyl_sum(3, &[1]), c(0.0, 0.0));
        assert_eq!(weyl_sum(3, &[6]), c(3.0, 0.0));
        assert_eq!(weyl_sum(4, &[2, 0]), c(0.0, 0.0));
        assert_eq!(weyl_sum(4, &[-4, 8]), c(16.0, 0.0));
        for m in 2..=8u64 {
            for a in -10..=10i64 {
                for b in -3..=3i64 {
                    assert!((weyl_sum(m, &[a, b]) - weyl_brute(m, &[a, b])).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn empirical_fourier_of_roots_matches_weyl() {
        for m in [3u64, 5, 8] {
            let cloud = mth_roots(&[c(1.0, 0.0), c(1.0, 0.0)], m, RootMode::All).unwrap();
            for a in -10..=10 {
                for b in -10..=10 {
                    let nu = [a, b];
                    // The arguments are θ = 2πℓ/m, so exp(−i⟨ν,θ⟩) sums to the
                    // conjugate Weyl sum, which is real.
                    let expected = weyl_sum(m, &nu) / (m * m) as f64;
                    assert!((empirical_fourier(&cloud, &nu).unwrap() - expected).norm() < 1e-12, "m={m} nu={nu:?}");
                }
            }
        }
    }

    #[test]
    fn polynomial_root_examples() {
        let r = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(close_multiset(r, vec![c(0.0, 1.0), c(0.0, -1.0)], 1e-12));

        let r = polynomial_roots(&[c(2.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(close_multiset(r, vec![c(1.0, 0.0), c(2.0, 0.0)], 1e-12));

        let r = polynomial_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let cube: Vec<Complex64> = mth_roots(&[c(1.0, 0.0)], 3, RootMode::All).unwrap().points.iter().map(|p| p[0]).collect();
        assert!(close_multiset(r, cube, 1e-12));

        let r = polynomial_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(close_multiset(r, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-12));

        assert!(polynomial_roots(&[c(1.0, 0.0)]).is_err());
        assert!(polynomial_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn repeated_and_badly_scaled_roots() {
        // (z − 1)³
        let r = polynomial_roots(&[c(-1.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(r.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-4));
        // z + e⁻⁹⁶ style coefficients from amoeba slices
        let tiny = (-96.0f64).exp();
        let r = polynomial_roots(&[c(1.0 + tiny, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((r[0] + c(1.0 + tiny, 0.0)).norm() < 1e-15);
        let r = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(tiny, 0.0)]).unwrap();
        assert!(r.iter().all(|z| (z * z * tiny + 1.0).norm() < 1e-6));
    }

    proptest! {
        #[test]
        fn vieta_product(coeffs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 2..=12)) {
            let mut cs: Vec<Complex64> = coeffs.iter().map(|(a, b)| c(*a, *b)).collect();
            prop_assume!(cs[0].norm() > 1e-3);
            let last = cs.len() - 1;
            if cs[last].norm() < 1e-3 {
                cs[last] = c(1.0, 0.0);
            }
            let roots = polynomial_roots(&cs).unwrap();
            prop_assert_eq!(roots.len(), last);
            let prod: f64 = roots.iter().map(|r| r.norm()).product();
            let expected = (cs[0] / cs[last]).norm();
            prop_assert!((prod - expected).abs() <= 1e-8 * expected.max(1.0), "{} vs {}", prod, expected);
        }
    }
}
