//! Simple Euclidean Jordan algebras, their symmetric cones, and the Riesz
//! distributions on them.
//!
//! * [`scalars`]: ℝ, ℂ, ℍ, 𝕆 arithmetic.
//! * [`jordan`]: the five simple algebra families, determinant, spectra,
//!   Jordan frames, Peirce structure.
//! * [`cone`]: cone membership, rank strata and the group elements
//!   `P(a)` and `M_λ`.
//! * [`riesz`]: `Γ_Ω`, measure classification on the Wallach set, Riesz
//!   densities, Laplace transforms.
//! * [`sampling`]: samplers for the exponentially tilted Riesz measures.
//! * [`verify`]: numerical checks of the identities and the report format.
//! * [`cli`]: the `symcone` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cone;
pub mod error;
pub mod jordan;
pub mod riesz;
pub mod rng;
pub mod sampling;
pub mod scalars;
pub mod verify;

pub use error::{Error, Result};
pub use jordan::{AlgebraDescriptor, Element, FamilyKind};
pub use scalars::{DivisionKind, DivisionScalar};
