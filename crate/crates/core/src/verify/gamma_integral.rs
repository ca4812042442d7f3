//! Monte Carlo check of `∫_Ω e^{−(x|y)} Δ(x)^{α−n/r} dx = Γ_Ω(α) Δ(y)^{−α}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::require_interior;
use crate::error::{Error, Result};
use crate::jordan::{determinant, Element};
use crate::riesz::gamma_omega_with_prefactor;
use crate::sampling::{mean_and_se, sample_tilted_continuous};
use crate::verify::report::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "route")]
pub enum Route {
    /// Draw from `ν_{α₀}` and reweight by
    /// `Γ_Ω(α₀) Δ(X)^{α−α₀} e^{−(X|y−e)}`. `None` picks
    /// `α₀ = (α + (r−1)d/2)/2`, which keeps the weights square-integrable.
    Importance { alpha0: Option<f64> },
    /// Draw from `ν_α` and use `Γ_Ω(α)·E[e^{−(X|y−e)}]`.
    Laplace,
}

impl Default for Route {
    fn default() -> Self {
        Self::Importance { alpha0: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaIntegralParams {
    pub alpha: f64,
    pub route: Route,
    pub samples: usize,
    pub seed: u64,
    /// Shift of the `(2π)` exponent on the target side only. Nonzero values
    /// exist to make a known-bad configuration for negative controls.
    pub fault_exponent_shift: f64,
}

/// Passes at 2% relative error.
pub fn gamma_integral_mc(y: &Element, p: &GammaIntegralParams) -> Result<VerificationReport> {
    let algebra = y.algebra();
    require_interior(y)?;
    if !(p.alpha > algebra.threshold()) {
        return Err(Error::Domain(format!(
            "the gamma integral converges only for α > {}, got {}",
            algebra.threshold(),
            p.alpha
        )));
    }
    let gamma_at = |a: f64, shift: f64| -> f64 {
        gamma_omega_with_prefactor(algebra, Complex64::from(a), shift)
            .value()
            .expect("no poles above the threshold")
            .re
    };
    let shift = &y.axpy(-1.0, &Element::identity(algebra));
    let (alpha0, route_label) = match p.route {
        Route::Importance { alpha0 } => {
            let a0 = alpha0.unwrap_or(0.5 * (p.alpha + algebra.threshold()));
            (a0, format!("importance alpha0={a0}"))
        }
        Route::Laplace => (p.alpha, "laplace".to_string()),
    };
    let batch = sample_tilted_continuous(algebra, alpha0, p.samples, p.seed)?;
    let g0 = gamma_at(alpha0, 0.0);
    let weights: Vec<f64> = batch
        .elements
        .iter()
        .map(|x| {
            let tilt = (-shift.inner(x)).exp();
            let reweight = if p.alpha == alpha0 {
                1.0
            } else {
                determinant(x).max(0.0).powf(p.alpha - alpha0)
            };
            g0 * reweight * tilt
        })
        .collect();
    let (estimate, se) = mean_and_se(&weights);
    let target = gamma_at(p.alpha, p.fault_exponent_shift) * determinant(y).powf(-p.alpha);
    let mut params = format!(
        "algebra={algebra} alpha={} route={route_label} y={:?}",
        p.alpha,
        y.coords()
    );
    if p.fault_exponent_shift != 0.0 {
        params.push_str(&format!(" fault_exponent_shift={}", p.fault_exponent_shift));
    }
    Ok(
        VerificationReport::relative("gamma_integral", target, estimate, 0.02)
            .params(params)
            .seed(p.seed)
            .samples(p.samples as u64)
            .std_error(se),
    )
}
