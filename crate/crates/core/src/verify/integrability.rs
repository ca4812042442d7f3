//! Growth of `I(λ) = ∫_{Ω, ‖x‖≤R} Δ(x)^λ dx` as `λ ↓ −1`.
//!
//! Write `x = z + t·e/√r` with `z ⊥ e`. The cross-section coordinate `z` is
//! drawn uniformly from the box `[−R, R]^{n−1}` (in an orthonormal basis of
//! `e^⊥`); the line integral in `t` is done by quadrature. Along the line
//! the eigenvalues are `μᵢ(z) + t/√r`, so with `w = t/√r + μ_min(z)` the
//! integrand is `w^λ Π (gᵢ + w)^λ`, `gᵢ = μᵢ − μ_min`. For `λ < 0` the
//! `w^λ` singularity is removed by the substitution `w = b·ξ^{1/(λ+1)}` on
//! `[0, b]` (`w = bξ²` for `λ ≥ 0`); beyond the smallest gap the integral is
//! taken in `log w`.
//! Plain indicator sampling of the whole box has infinite variance for
//! `λ ≤ −1/2`, which is exactly the range of interest.

use rayon::prelude::*;

use crate::error::Result;
use crate::jordan::{eigenvalues, AlgebraDescriptor, Element};
use crate::rng::{derive_seed, Stream};
use crate::sampling::SHARD_SIZE;
use crate::verify::quadrature::{gauss_legendre, integrate};
use crate::verify::report::VerificationReport;

const NODES: usize = 16;
pub const GROWTH_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub lambda: f64,
    pub value: f64,
    pub std_error: f64,
}

fn cross_section_basis(algebra: AlgebraDescriptor) -> Vec<Vec<f64>> {
    let n = algebra.dim();
    let e = Element::identity(algebra);
    let norm = e.norm();
    let mut basis: Vec<Vec<f64>> = vec![e.coords().iter().map(|c| c / norm).collect()];
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
        }
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 0.3 {
            basis.push(v.into_iter().map(|x| x / len).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    basis.remove(0);
    basis
}

/// `∫_0^W w^λ Π(gᵢ + w)^λ dw`.
fn line_integral(lambda: f64, gaps: &[f64], upper: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let phi = |w: f64| gaps.iter().map(|g| (g + w).powf(lambda)).product::<f64>();
    let mut breaks: Vec<f64> = gaps
        .iter()
        .copied()
        .filter(|&g| g > 0.0 && g < upper)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.push(upper);
    let first = breaks[0];
    let mut total = if lambda < 0.0 {
        let p = 1.0 / (lambda + 1.0);
        first.powf(lambda + 1.0) * p * integrate(rule, 0.0, 1.0, |xi| phi(first * xi.powf(p)))
    } else {
        // w = bξ²
        let scale = 2.0 * first.powf(lambda + 1.0);
        scale
            * integrate(rule, 0.0, 1.0, |xi| {
                xi.powf(2.0 * lambda + 1.0) * phi(first * xi * xi)
            })
    };
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b > a {
            total += integrate(rule, a.ln(), b.ln(), |s| {
                let w = s.exp();
                (s * (lambda + 1.0)).exp() * phi(w)
            });
        }
    }
    total
}

/// Estimates `I(λ)` for each `λ` from one set of `count` cross-section draws.
pub fn integrability_estimates(
    algebra: AlgebraDescriptor,
    lambdas: &[f64],
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    if let Some(bad) = lambdas.iter().find(|l| !(**l > -1.0)) {
        return Err(crate::Error::Domain(format!(
            "the scan needs λ > −1, got {bad}"
        )));
    }
    let basis = cross_section_basis(algebra);
    let rule = gauss_legendre(NODES);
    let sqrt_r = (algebra.rank() as f64).sqrt();
    let shards = count.div_ceil(SHARD_SIZE);
    let sums: Vec<Vec<(f64, f64)>> = (0..shards)
        .into_par_iter()
        .map(|s| -> Result<Vec<(f64, f64)>> {
            let mut stream = Stream::shard(seed, s as u64);
            let mut acc = vec![(0.0, 0.0); lambdas.len()];
            for _ in 0..SHARD_SIZE.min(count - s * SHARD_SIZE) {
                let xi: Vec<f64> = (0..basis.len())
                    .map(|_| stream.uniform_in(-radius, radius))
                    .collect();
                let z_norm_sq: f64 = xi.iter().map(|x| x * x).sum();
                if z_norm_sq >= radius * radius {
                    continue;
                }
                let mut coords = vec![0.0; algebra.dim()];
                for (x, b) in xi.iter().zip(&basis) {
                    for (c, bk) in coords.iter_mut().zip(b) {
                        *c += x * bk;
                    }
                }
                let mu = eigenvalues(&Element::new(algebra, coords)?)?;
                let mu_min = *mu.last().expect("rank >= 1");
                let upper = (radius * radius - z_norm_sq).sqrt() / sqrt_r + mu_min;
                if upper <= 0.0 {
                    continue;
                }
                let gaps: Vec<f64> = mu[..mu.len() - 1].iter().map(|m| m - mu_min).collect();
                for (slot, &lambda) in acc.iter_mut().zip(lambdas) {
                    let h = sqrt_r * line_integral(lambda, &gaps, upper, &rule);
                    slot.0 += h;
                    slot.1 += h * h;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let box_volume = (2.0 * radius).powi(basis.len() as i32);
    let n = count as f64;
    Ok(lambdas
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let (sum, sum_sq) = sums
                .iter()
                .fold((0.0, 0.0), |(a, b), s| (a + s[i].0, b + s[i].1));
            let mean = sum / n;
            let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
            Estimate {
                lambda,
                value: box_volume * mean,
                std_error: box_volume * (var / n).sqrt(),
            }
        })
        .collect())
}

/// Reports, in order:
/// * per `λ`, a seed-stability check comparing two independent runs
///   (pass iff finite and within 3 combined standard errors);
/// * monotone growth along the list sorted by decreasing `λ`
///   (violations beyond 3 standard errors are counted; pass iff none);
/// * if the list contains −0.5 and −0.95, the growth ratio
///   `I(−0.95)/I(−0.5) ≥ 10`.
pub fn integrability_scan(
    algebra: AlgebraDescriptor,
    lambdas: &[f64],
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let first = integrability_estimates(algebra, &sorted, radius, count, seed)?;
    let second = integrability_estimates(algebra, &sorted, radius, count, derive_seed(seed, 1))?;
    let meta = |r: VerificationReport, extra: String| {
        r.params(format!("algebra={algebra} R={radius} {extra}"))
            .seed(seed)
            .samples(count as u64)
    };
    let mut out = Vec::new();
    for (a, b) in first.iter().zip(&second) {
        let se = a.std_error.hypot(b.std_error);
        let tolerance = 3.0 * se;
        let passed =
            a.value.is_finite() && b.value.is_finite() && (a.value - b.value).abs() <= tolerance;
        out.push(meta(
            VerificationReport::with_verdict(
                "integrability_value",
                a.value,
                b.value,
                tolerance,
                passed,
            )
            .std_error(a.std_error),
            format!("lambda={}", a.lambda),
        ));
    }
    let violations = first
        .windows(2)
        .filter(|w| w[1].value < w[0].value - 3.0 * w[0].std_error.hypot(w[1].std_error))
        .count();
    out.push(meta(
        VerificationReport::with_verdict(
            "integrability_monotone",
            0.0,
            violations as f64,
            0.0,
            violations == 0,
        ),
        format!("lambdas={sorted:?}"),
    ));
    let find = |l: f64| first.iter().find(|e| (e.lambda - l).abs() < 1e-12);
    if let (Some(mid), Some(low)) = (find(-0.5), find(-0.95)) {
        let ratio = low.value / mid.value;
        let rel = ratio * low.std_error.hypot(mid.std_error * ratio) / low.value;
        out.push(meta(
            VerificationReport::with_verdict(
                "integrability_growth",
                GROWTH_FACTOR,
                ratio,
                GROWTH_FACTOR,
                ratio >= GROWTH_FACTOR,
            )
            .std_error(rel),
            "ratio=I(-0.95)/I(-0.5)".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Volume of `{‖x‖ ≤ R, angle(x, e) < 45°}` in `ℝ^n` (every rank-2 cone).
    fn cone_ball_volume(n: usize, radius: f64) -> f64 {
        let rule = gauss_legendre(40);
        let sphere = |k: usize| {
            2.0 * PI.powf((k + 1) as f64 / 2.0) / crate::riesz::gamma((k + 1) as f64 / 2.0)
        };
        let cap = sphere(n - 2) * integrate(&rule, 0.0, PI / 4.0, |t| t.sin().powi(n as i32 - 2));
        cap * radius.powi(n as i32) / n as f64
    }

    #[test]
    fn closed_form_volumes() {
        assert!(
            (cone_ball_volume(3, 2.0) - 2.0 * PI / 3.0 * 8.0 * (1.0 - (PI / 4.0).cos())).abs()
                < 1e-12
        );
        assert!((cone_ball_volume(4, 2.0) - 16.0 * PI * (PI / 8.0 - 0.25)).abs() < 1e-12);
    }

    #[test]
    fn line_integral_matches_closed_forms() {
        let rule = gauss_legendre(NODES);
        // no gaps: ∫_0^W w^λ dw
        for lambda in [-0.95, -0.5, 0.0, 0.5] {
            let got = line_integral(lambda, &[], 2.0, &rule);
            let want = 2f64.powf(lambda + 1.0) / (lambda + 1.0);
            assert!((got - want).abs() < 1e-12 * want, "λ={lambda}");
        }
        // one gap, λ = 1: ∫_0^W w(g + w) dw
        let got = line_integral(1.0, &[0.3], 2.0, &rule);
        let want = 0.3 * 2.0 + 8.0 / 3.0;
        assert!((got - want).abs() < 1e-12);
        // one gap, λ = −1/2: ∫_0^W dw/√(w(g+w)) = 2 asinh(√(W/g))
        let (g, w) = (0.01, 3.0);
        let got = line_integral(-0.5, &[g], w, &rule);
        let want = 2.0 * (w / g).sqrt().asinh();
        assert!((got - want).abs() < 1e-6 * want, "{got} vs {want}");
    }

    #[test]
    fn zero_exponent_gives_the_cone_ball_volume() {
        for (a, n) in [
            (AlgebraDescriptor::sym_real(2).unwrap(), 3),
            (AlgebraDescriptor::lorentz(4).unwrap(), 4),
        ] {
            let est = &integrability_estimates(a, &[0.0], 2.0, 100_000, 3).unwrap()[0];
            let want = cone_ball_volume(n, 2.0);
            assert!(
                (est.value - want).abs() < 0.02 * want,
                "{a}: {} vs {want}",
                est.value
            );
            assert!((est.value - want).abs() < 4.0 * est.std_error, "{a}");
        }
    }

    #[test]
    fn rank_three_zero_exponent_matches_indicator_sampling() {
        // brute force: uniform points in the ball's bounding box
        let a = AlgebraDescriptor::sym_real(3).unwrap();
        let est = &integrability_estimates(a, &[0.0], 1.0, 50_000, 4).unwrap()[0];
        let mut s = Stream::new(9);
        let trials = 200_000;
        let mut hits = 0;
        for _ in 0..trials {
            let x: Vec<f64> = (0..6).map(|_| s.uniform_in(-1.0, 1.0)).collect();
            if x.iter().map(|c| c * c).sum::<f64>() > 1.0 {
                continue;
            }
            let el = Element::new(a, x).unwrap();
            if *eigenvalues(&el).unwrap().last().unwrap() > 0.0 {
                hits += 1;
            }
        }
        let brute = 64.0 * hits as f64 / trials as f64;
        let brute_se = 64.0 * ((hits as f64 / trials as f64) / trials as f64).sqrt();
        assert!(
            (est.value - brute).abs() < 4.0 * est.std_error.hypot(brute_se),
            "{} vs {brute}",
            est.value
        );
    }

    #[test]
    fn scan_reports_growth_on_rank_two() {
        let a = AlgebraDescriptor::sym_real(2).unwrap();
        let reports =
            integrability_scan(a, &[0.5, 0.0, -0.5, -0.8, -0.95], 2.0, 100_000, 5).unwrap();
        assert_eq!(reports.len(), 7);
        for r in &reports {
            assert!(r.passed, "{r:?}");
        }
        let growth = reports.last().unwrap();
        assert_eq!(growth.check_name, "integrability_growth");
        assert!(
            growth.estimate.re > 12.0 && growth.estimate.re < 16.0,
            "{growth:?}"
        );
    }

    #[test]
    fn rejects_lambda_at_or_below_minus_one() {
        let a = AlgebraDescriptor::sym_real(2).unwrap();
        assert!(integrability_estimates(a, &[-1.0], 2.0, 10, 1).is_err());
    }
}
