//! Characteristic polynomial, determinant, eigenvalues and Jordan frames.
//!
//! The characteristic polynomial comes from Newton's identities on the
//! power traces `p_k = tr(x^k)`. This works uniformly for every family,
//! including the octonionic one, since Jordan powers are well defined by
//! power associativity.

use nalgebra::SymmetricEigen;

use super::{multiplication_operator, Element};
use crate::error::{Error, Result};

/// Coefficients `[1, e₁, …, e_r]`: the elementary symmetric functions of
/// the eigenvalues, so that the characteristic polynomial is
/// `λ^r − e₁λ^{r−1} + e₂λ^{r−2} − … + (−1)^r e_r`.
pub fn char_poly(x: &Element) -> Vec<f64> {
    let r = x.algebra().rank();
    let mut power_traces = Vec::with_capacity(r);
    let mut pw = x.clone();
    for k in 1..=r {
        power_traces.push(pw.trace());
        if k < r {
            pw = x.circ(&pw);
        }
    }
    let mut e = vec![0.0; r + 1];
    e[0] = 1.0;
    for k in 1..=r {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * power_traces[i - 1];
        }
        e[k] = acc / k as f64;
    }
    e
}

/// Jordan determinant `Δ(x) = e_r`.
pub fn determinant(x: &Element) -> f64 {
    *char_poly(x).last().expect("rank >= 1")
}

/// Roots of the characteristic polynomial, sorted descending, without the
/// operator-spectrum refinement applied by [`eigenvalues`].
pub fn char_poly_roots(x: &Element) -> Result<Vec<f64>> {
    let e = char_poly(x);
    let mut roots = match e.len() - 1 {
        1 => vec![e[1]],
        2 => quadratic_roots(e[1], e[2]).to_vec(),
        3 => cubic_roots(e[1], e[2], e[3]).to_vec(),
        _ => laguerre_roots(&monic_coeffs(&e))?,
    };
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

/// Eigenvalues of `x`, sorted descending.
///
/// Characteristic-polynomial roots are accurate only to about `√ε` at
/// repeated eigenvalues. Every eigenvalue of `x` is also an eigenvalue of
/// the symmetric operator `L(x)` (on the Peirce space `V_ii`), which a
/// dense symmetric solver resolves to `ε·‖x‖`, so each root is replaced by
/// the nearest eigenvalue of `L(x)`.
pub fn eigenvalues(x: &Element) -> Result<Vec<f64>> {
    let roots = char_poly_roots(x)?;
    let op_spectrum = SymmetricEigen::new(multiplication_operator(x)).eigenvalues;
    let mut refined: Vec<f64> = roots
        .iter()
        .map(|root| {
            op_spectrum
                .iter()
                .copied()
                .min_by(|a, b| (a - root).abs().total_cmp(&(b - root).abs()))
                .unwrap_or(*root)
        })
        .collect();
    refined.sort_by(|a, b| b.total_cmp(a));
    Ok(refined)
}

fn quadratic_roots(e1: f64, e2: f64) -> [f64; 2] {
    let disc = (e1 * e1 - 4.0 * e2).max(0.0);
    let sq = disc.sqrt();
    let q = if e1 >= 0.0 {
        0.5 * (e1 + sq)
    } else {
        0.5 * (e1 - sq)
    };
    if q == 0.0 {
        [0.0, 0.0]
    } else {
        [q, e2 / q]
    }
}

fn eval_cubic(e1: f64, e2: f64, e3: f64, t: f64) -> (f64, f64) {
    let p = ((t - e1) * t + e2) * t - e3;
    let dp = (3.0 * t - 2.0 * e1) * t + e2;
    (p, dp)
}

/// Trigonometric method for `λ³ − e₁λ² + e₂λ − e₃`, all roots real.
fn cubic_roots(e1: f64, e2: f64, e3: f64) -> [f64; 3] {
    let shift = e1 / 3.0;
    let p = e2 - e1 * e1 / 3.0;
    let q = -2.0 * e1 * e1 * e1 / 27.0 + e1 * e2 / 3.0 - e3;
    let mut roots = if p >= 0.0 {
        // triple root up to rounding
        let t = (-q).cbrt();
        [t + shift; 3]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let third = 2.0 * std::f64::consts::PI / 3.0;
        [
            m * theta.cos() + shift,
            m * (theta - third).cos() + shift,
            m * (theta - 2.0 * third).cos() + shift,
        ]
    };
    for t in &mut roots {
        for _ in 0..3 {
            let (val, der) = eval_cubic(e1, e2, e3, *t);
            if der == 0.0 || val == 0.0 {
                break;
            }
            let cand = *t - val / der;
            if eval_cubic(e1, e2, e3, cand).0.abs() < val.abs() {
                *t = cand;
            } else {
                break;
            }
        }
    }
    roots
}

/// Ascending power-basis coefficients `c₀ … c_r` with `c_r = 1`.
fn monic_coeffs(e: &[f64]) -> Vec<f64> {
    let r = e.len() - 1;
    (0..=r)
        .map(|k| {
            let ek = e[r - k];
            if (r - k).is_multiple_of(2) {
                ek
            } else {
                -ek
            }
        })
        .collect()
}

fn horner(c: &[f64], x: f64) -> (f64, f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    let mut ddp = 0.0;
    for &ck in c.iter().rev() {
        ddp = ddp * x + 2.0 * dp;
        dp = dp * x + p;
        p = p * x + ck;
    }
    (p, dp, ddp)
}

/// Laguerre iteration with deflation; converges monotonically to the
/// largest root of a real-rooted polynomial from any upper bound.
fn laguerre_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    let mut c = coeffs.to_vec();
    let mut roots = Vec::with_capacity(coeffs.len() - 1);
    while c.len() > 1 {
        let deg = (c.len() - 1) as f64;
        let bound = 1.0 + c[..c.len() - 1].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut x = bound;
        let mut converged = false;
        for _ in 0..200 {
            let (p, dp, ddp) = horner(&c, x);
            if p == 0.0 {
                converged = true;
                break;
            }
            let g = dp / p;
            let h = g * g - ddp / p;
            let rad = ((deg - 1.0) * (deg * h - g * g)).max(0.0).sqrt();
            let denom = if g >= 0.0 { g + rad } else { g - rad };
            if denom == 0.0 {
                break;
            }
            let step = deg / denom;
            x -= step;
            if step.abs() <= 1e-15 * (1.0 + x.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numerical(format!(
                "Laguerre iteration did not converge (degree {deg}, last iterate {x})"
            )));
        }
        roots.push(x);
        // synthetic division by (λ − x)
        let mut next = vec![0.0; c.len() - 1];
        let mut carry = 0.0;
        for k in (1..c.len()).rev() {
            carry = c[k] + carry * x;
            next[k - 1] = carry;
        }
        c = next;
    }
    for root in &mut roots {
        for _ in 0..3 {
            let (p, dp, _) = horner(coeffs, *root);
            if dp == 0.0 || p == 0.0 {
                break;
            }
            let cand = *root - p / dp;
            if horner(coeffs, cand).0.abs() < p.abs() {
                *root = cand;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}

/// Eigenvalues `λ₁ ≥ … ≥ λ_r` with a Jordan frame `c₁ … c_r` such that
/// `x = Σ λᵢ cᵢ`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub frame: Vec<Element>,
}

impl SpectralDecomposition {
    /// `Σ λᵢ cᵢ`.
    pub fn reconstruct(&self) -> Element {
        let algebra = self.frame[0].algebra();
        self.eigenvalues
            .iter()
            .zip(&self.frame)
            .fold(Element::zero(algebra), |acc, (l, c)| acc.axpy(*l, c))
    }

    /// `c₁ + … + c_k`.
    pub fn partial_identity(&self, k: usize) -> Element {
        let algebra = self.frame[0].algebra();
        self.frame[..k]
            .iter()
            .fold(Element::zero(algebra), |acc, c| acc.axpy(1.0, c))
    }
}

/// Spectral decomposition by Lagrange interpolation
/// `cᵢ = Π_{j≠i} (x − λⱼe)/(λᵢ − λⱼ)`.
///
/// Requires pairwise gaps above `1e−6·(1 + max|λ|)`; otherwise returns
/// [`Error::DegenerateSpectrum`] and the caller should perturb `x` (a random
/// perturbation of size 1e−8 is enough in practice).
pub fn spectral_frame(x: &Element) -> Result<SpectralDecomposition> {
    let lambdas = eigenvalues(x)?;
    let scale = lambdas.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let tolerance = 1e-6 * (1.0 + scale);
    let gap = lambdas
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    if gap <= tolerance {
        return Err(Error::DegenerateSpectrum { gap, tolerance });
    }
    let algebra = x.algebra();
    let e = Element::identity(algebra);
    let frame = lambdas
        .iter()
        .enumerate()
        .map(|(i, li)| {
            lambdas
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(e.clone(), |acc, (_, lj)| {
                    let factor = x.axpy(-lj, &e).scale(1.0 / (li - lj));
                    acc.circ(&factor)
                })
        })
        .collect();
    Ok(SpectralDecomposition {
        eigenvalues: lambdas,
        frame,
    })
}
