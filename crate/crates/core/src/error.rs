use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments: mismatched kinds, invalid sizes, out-of-range parameters.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("elements belong to different algebras ({left} vs {right})")]
    AlgebraMismatch { left: String, right: String },

    #[error("parameter outside its domain: {0}")]
    Domain(String),

    #[error("point is not in the open cone (min eigenvalue {min_eigenvalue:e})")]
    NotInCone { min_eigenvalue: f64 },

    #[error("eigenvalues too close for a spectral frame (gap {gap:e} <= tolerance {tolerance:e}); perturb the input")]
    DegenerateSpectrum { gap: f64, tolerance: f64 },

    #[error("element is not idempotent (residual {residual:e})")]
    NotIdempotent { residual: f64 },

    #[error("frame has {got} idempotents, rank is {rank}")]
    IncompleteFrame { got: usize, rank: usize },

    #[error("sampling is not supported for {0}")]
    UnsupportedSampler(String),

    #[error("empty sample batch")]
    EmptyBatch,

    #[error("finite-difference step {step} too large: stencil leaves the cone (min eigenvalue {min_eigenvalue})")]
    StepTooLarge { step: f64, min_eigenvalue: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
