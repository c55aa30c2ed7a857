use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum BhtError {
    #[error("grid count {0} is not a power of two (or is below 16)")]
    BadGridCount(usize),
    #[error("period must be positive, got {0}")]
    BadPeriod(f64),
    #[error("frequency band [{lo}, {hi}] not representable on this grid (nyquist {nyquist})")]
    BandOutOfRange { lo: f64, hi: f64, nyquist: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("quadrature did not converge: estimated error {est_error:e} after {refinements} refinements")]
    QuadratureNoConvergence { est_error: f64, refinements: usize },
    #[error("unknown operator id `{0}`")]
    UnknownOp(String),
    #[error("fit needs at least 4 points with positive values, got {0}")]
    FitUnderdetermined(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, BhtError>;
