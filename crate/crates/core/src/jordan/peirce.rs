//! Peirce structure relative to idempotents and Jordan frames.

use nalgebra::SymmetricEigen;

use super::{multiplication_operator, Element, SpectralDecomposition};
use crate::error::{Error, Result};

const IDEMPOTENT_TOL: f64 = 1e-8;
const EIGEN_TOL: f64 = 1e-6;

/// Multiplicities `(n₁, n_½, n₀)` of the eigenvalues 1, ½, 0 of `L(c)`.
///
/// For a primitive idempotent this is `(1, (r−1)d, n − 1 − (r−1)d)`.
pub fn peirce_multiplicities(c: &Element) -> Result<(usize, usize, usize)> {
    let residual = (&c.square() - c).max_abs_coord();
    if residual > IDEMPOTENT_TOL * (1.0 + c.max_abs_coord()) {
        return Err(Error::NotIdempotent { residual });
    }
    let spectrum = SymmetricEigen::new(multiplication_operator(c)).eigenvalues;
    let mut counts = (0, 0, 0);
    for mu in spectrum.iter() {
        if (mu - 1.0).abs() < EIGEN_TOL {
            counts.0 += 1;
        } else if (mu - 0.5).abs() < EIGEN_TOL {
            counts.1 += 1;
        } else if mu.abs() < EIGEN_TOL {
            counts.2 += 1;
        } else {
            return Err(Error::Numerical(format!(
                "L(c) has eigenvalue {mu} outside {{0, 1/2, 1}}"
            )));
        }
    }
    Ok(counts)
}

/// Component of `y` in the Peirce space `V_ij` of a Jordan frame.
///
/// `V_ii` is the image of `P(cᵢ)`; for `i ≠ j` the projector is
/// `4·L(cᵢ)L(cⱼ)`.
pub fn peirce_project(frame: &SpectralDecomposition, i: usize, j: usize, y: &Element) -> Element {
    let ci = &frame.frame[i];
    if i == j {
        ci.quad_rep(y)
    } else {
        ci.circ(&frame.frame[j].circ(y)).scale(4.0)
    }
}
