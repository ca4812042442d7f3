//! Moments of `f(x) = e^{−log²x} sin(2π log x)` on `x > 0`, all of which
//! vanish although `f ≢ 0`.

use std::f64::consts::{PI, TAU};

use super::quadrature::gauss_hermite;
use super::report::VerificationReport;
use crate::error::{Error, Result};

pub const MAX_MOMENT: u32 = 12;
const NODES: usize = 64;

fn check_order(n: u32) -> Result<()> {
    if n > MAX_MOMENT {
        return Err(Error::Domain(format!(
            "moments are computed for n ≤ {MAX_MOMENT}, got {n}"
        )));
    }
    Ok(())
}

/// With `u = log x` and `u = t + (n+1)/2` the moment is
/// `e^{(n+1)²/4} ∫ e^{−t²} sin(2πt + π(n+1)) dt`.
pub fn moment(n: u32) -> Result<f64> {
    check_order(n)?;
    let c = (n + 1) as f64 / 2.0;
    let (x, w) = gauss_hermite(NODES);
    let inner: f64 = x
        .iter()
        .zip(&w)
        .map(|(t, w)| w * (TAU * (t + c)).sin())
        .sum();
    Ok((c * c).exp() * inner)
}

/// `∫_0^∞ xⁿ e^{−log²x} dx` by the same rule.
pub fn companion(n: u32) -> Result<f64> {
    check_order(n)?;
    let c = (n + 1) as f64 / 2.0;
    let (_, w) = gauss_hermite(NODES);
    Ok((c * c).exp() * w.iter().sum::<f64>())
}

/// Passes iff `|moment(n)| ≤ 1e−8·e^{(n+1)²/4}`.
pub fn stieltjes_moment(n: u32) -> Result<VerificationReport> {
    let value = moment(n)?;
    let scale = ((n + 1) as f64).powi(2) / 4.0;
    let tolerance = 1e-8 * scale.exp();
    Ok(
        VerificationReport::absolute("stieltjes_moment", 0.0, value, tolerance)
            .params(format!("n={n}")),
    )
}

/// Companion integral against `√π·e^{(n+1)²/4}`, 1e−10 relative.
pub fn stieltjes_companion(n: u32) -> Result<VerificationReport> {
    let value = companion(n)?;
    let target = PI.sqrt() * (((n + 1) as f64).powi(2) / 4.0).exp();
    Ok(
        VerificationReport::relative("stieltjes_companion", target, value, 1e-10)
            .params(format!("n={n}")),
    )
}
