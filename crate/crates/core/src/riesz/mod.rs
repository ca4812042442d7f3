//! Riesz distributions `R_α` on a symmetric cone: the cone gamma function,
//! the classification of the parameters `α` for which `R_α` is a (positive
//! or complex) measure, densities, Laplace transforms, and the constants in
//! the Cayley-type identities.

pub mod gamma;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::require_interior;
use crate::error::{Error, Result};
use crate::jordan::{determinant, AlgebraDescriptor, Element};

pub use gamma::{complex_gamma, gamma};

/// Tolerance for deciding that a user-supplied `α` sits on a discrete point.
pub const DISCRETE_TOL: f64 = 1e-12;

/// A complex number that may instead be a pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    pub is_pole: bool,
}

impl ComplexValue {
    pub fn finite(z: Complex64) -> Self {
        Self {
            re: z.re,
            im: z.im,
            is_pole: false,
        }
    }

    pub fn pole() -> Self {
        Self {
            re: f64::NAN,
            im: f64::NAN,
            is_pole: true,
        }
    }

    pub fn value(&self) -> Option<Complex64> {
        (!self.is_pole).then(|| Complex64::new(self.re, self.im))
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pole {
            f.write_str("pole")
        } else if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureVerdict {
    DiracDelta,
    /// `α = kd/2`, `1 ≤ k ≤ r−1`: a positive measure on the rank-`k` stratum.
    DiscreteWallach(usize),
    PositiveAbsolutelyContinuous,
    ComplexMeasureAC,
    NotAMeasure,
}

impl MeasureVerdict {
    pub fn is_positive(self) -> bool {
        matches!(
            self,
            Self::DiracDelta | Self::DiscreteWallach(_) | Self::PositiveAbsolutelyContinuous
        )
    }
}

impl fmt::Display for MeasureVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DiracDelta => f.write_str("DiracDelta"),
            Self::DiscreteWallach(k) => write!(f, "DiscreteWallach({k})"),
            Self::PositiveAbsolutelyContinuous => f.write_str("PositiveAbsolutelyContinuous"),
            Self::ComplexMeasureAC => f.write_str("ComplexMeasureAC"),
            Self::NotAMeasure => f.write_str("NotAMeasure"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureClassification {
    pub verdict: MeasureVerdict,
    pub alpha: Complex64,
    /// `(r−1)d/2`.
    pub threshold: f64,
}

/// `Γ_Ω(α) = (2π)^{(n−r)/2} Π_{j<r} Γ(α − jd/2)`.
pub fn gamma_omega(algebra: AlgebraDescriptor, alpha: Complex64) -> ComplexValue {
    gamma_omega_with_prefactor(algebra, alpha, 0.0)
}

/// Same product with the `(2π)` exponent shifted by `exponent_shift`.
/// Only the verification harness's negative control uses a nonzero shift.
pub(crate) fn gamma_omega_with_prefactor(
    algebra: AlgebraDescriptor,
    alpha: Complex64,
    exponent_shift: f64,
) -> ComplexValue {
    let (r, n) = (algebra.rank(), algebra.dim());
    let mut product = Complex64::from((2.0 * PI).powf((n - r) as f64 / 2.0 + exponent_shift));
    for j in 0..r {
        let z = alpha - j as f64 * algebra.half_d();
        if is_nonpositive_integer(z) {
            return ComplexValue::pole();
        }
        product *= complex_gamma(z);
    }
    ComplexValue::finite(product)
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im.abs() <= DISCRETE_TOL
        && z.re <= DISCRETE_TOL
        && (z.re - z.re.round()).abs() <= DISCRETE_TOL
}

/// Index `k` with `α = kd/2`, `0 ≤ k ≤ r−1`, if `α` is such a point.
pub fn discrete_index(algebra: AlgebraDescriptor, alpha: Complex64) -> Option<usize> {
    if alpha.im.abs() > DISCRETE_TOL {
        return None;
    }
    (0..algebra.rank()).find(|&k| (alpha.re - k as f64 * algebra.half_d()).abs() <= DISCRETE_TOL)
}

/// For which `α` the distribution `R_α` is a positive measure, a complex
/// measure, or neither.
pub fn classify_measure(algebra: AlgebraDescriptor, alpha: Complex64) -> MeasureClassification {
    let threshold = algebra.threshold();
    let verdict = match discrete_index(algebra, alpha) {
        Some(0) => MeasureVerdict::DiracDelta,
        Some(k) => MeasureVerdict::DiscreteWallach(k),
        None if alpha.re > threshold => {
            if alpha.im.abs() <= DISCRETE_TOL {
                MeasureVerdict::PositiveAbsolutelyContinuous
            } else {
                MeasureVerdict::ComplexMeasureAC
            }
        }
        None => MeasureVerdict::NotAMeasure,
    };
    MeasureClassification {
        verdict,
        alpha,
        threshold,
    }
}

/// Density `Δ(x)^{α−n/r}/Γ_Ω(α)` of `R_α` on `Ω`, zero off `Ω`.
pub fn riesz_density(alpha: Complex64, x: &Element) -> Result<Complex64> {
    let algebra = x.algebra();
    if alpha.re <= algebra.threshold() {
        return Err(Error::Domain(format!(
            "R_α has a density only for Re α > {}, got {alpha}",
            algebra.threshold()
        )));
    }
    if require_interior(x).is_err() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let g = gamma_omega(algebra, alpha)
        .value()
        .expect("no poles above the threshold");
    let log_det = determinant(x).ln();
    Ok(((alpha - algebra.n_over_r()) * log_det).exp() / g)
}

/// `Δ(y)^{−α}` for `y ∈ Ω`, principal branch.
pub fn laplace_transform(alpha: Complex64, y: &Element) -> Result<Complex64> {
    require_interior(y)?;
    Ok((-alpha * determinant(y).ln()).exp())
}

/// `C_α = Π_{j<r} (α − jd/2)`.
pub fn recursion_constant(algebra: AlgebraDescriptor, alpha: Complex64) -> Complex64 {
    (0..algebra.rank())
        .map(|j| alpha - j as f64 * algebra.half_d())
        .product()
}

/// `Π_{j<r} (λ + jd/2)`.
pub fn cayley_constant(algebra: AlgebraDescriptor, lambda: Complex64) -> Complex64 {
    (0..algebra.rank())
        .map(|j| lambda + j as f64 * algebra.half_d())
        .product()
}

/// Right side of the Cayley identity, `Δ(y)^{λ−1}·Π_{j<r}(λ + jd/2)`.
pub fn cayley_rhs(lambda: Complex64, y: &Element) -> Result<Complex64> {
    require_interior(y)?;
    let c = cayley_constant(y.algebra(), lambda);
    Ok(c * ((lambda - 1.0) * determinant(y).ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    Forbidden,
    NoObstruction,
}

/// Sign of `C_β` with factors within [`DISCRETE_TOL`] of zero counted as zero.
fn recursion_sign(algebra: AlgebraDescriptor, beta: f64) -> i32 {
    let mut sign = 1;
    for j in 0..algebra.rank() {
        let f = beta - j as f64 * algebra.half_d();
        if f.abs() <= DISCRETE_TOL {
            return 0;
        }
        if f < 0.0 {
            sign = -sign;
        }
    }
    sign
}

/// Witness that `R_α` cannot be a positive measure, found by the descent
/// argument:
///
/// * `C_β < 0` rules out `β` (since `Δ·R_β = C_β R_{β+1}` and `R_{β+1}`
///   has a positive Laplace transform);
/// * `β + d/2` ruled out implies `β` ruled out (`R_β * R_{d/2} = R_{β+d/2}`);
/// * `β + 1` ruled out and `C_β > 0` implies `β` ruled out.
///
/// Points of the Wallach set are never ruled out. The test is sufficient,
/// not necessary: some `α < 0` of even rank escape it.
pub fn sign_obstruction(algebra: AlgebraDescriptor, alpha: f64) -> Obstruction {
    let mut memo = HashMap::new();
    if forbidden(algebra, alpha, 0, 0, &mut memo) {
        Obstruction::Forbidden
    } else {
        Obstruction::NoObstruction
    }
}

fn forbidden(
    algebra: AlgebraDescriptor,
    alpha: f64,
    ones: u32,
    halves: u32,
    memo: &mut HashMap<(u32, u32), bool>,
) -> bool {
    if let Some(&v) = memo.get(&(ones, halves)) {
        return v;
    }
    let beta = alpha + ones as f64 + halves as f64 * algebra.half_d();
    let result = if beta > algebra.threshold() + DISCRETE_TOL
        || discrete_index(algebra, beta.into()).is_some()
    {
        false
    } else {
        match recursion_sign(algebra, beta) {
            -1 => true,
            _ => {
                forbidden(algebra, alpha, ones, halves + 1, memo)
                    || forbidden(algebra, alpha, ones + 1, halves, memo)
            }
        }
    };
    memo.insert((ones, halves), result);
    result
}

/// `Δ^λ` is locally integrable on `Ω̄` iff `Re λ > −1`.
pub fn locally_integrable(lambda: Complex64) -> bool {
    lambda.re > -1.0
}
