//! Gauss–Legendre and Gauss–Hermite rules (Newton iteration on the
//! three-term recurrences).

use std::f64::consts::PI;

/// Nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp;
        loop {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `∫_a^b f` by `n`-point Gauss–Legendre.
pub fn integrate<F: Fn(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64, f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Nodes and weights for `∫ f(t) e^{−t²} dt`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^{−1/4}
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (PIM4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-14 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riesz::gamma;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(10);
        for k in 0..20 {
            let got = integrate(&rule, -1.0, 1.0, |x| x.powi(k));
            let want = if k % 2 == 0 {
                2.0 / (k + 1) as f64
            } else {
                0.0
            };
            assert!((got - want).abs() < 1e-14, "x^{k}: {got}");
        }
        let got = integrate(&rule, 0.0, 2.0, f64::exp);
        assert!((got - (2f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn hermite_moments_match_half_integer_gammas() {
        for n in [5, 20, 64] {
            let (x, w) = gauss_hermite(n);
            for k in 0..n.min(20) {
                let got: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(t, w)| w * t.powi(2 * k as i32))
                    .sum();
                let want = gamma(k as f64 + 0.5);
                assert!(
                    (got - want).abs() <= 1e-12 * want,
                    "n={n} k={k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn hermite_cosine_transform() {
        // ∫ e^{−t²} cos(ωt) dt = √π e^{−ω²/4}
        let (x, w) = gauss_hermite(64);
        let omega = 2.0 * PI;
        let got: f64 = x.iter().zip(&w).map(|(t, w)| w * (omega * t).cos()).sum();
        let want = PI.sqrt() * (-omega * omega / 4.0).exp();
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }
}
