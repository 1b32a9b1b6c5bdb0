use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("entry count {len} does not match dimension {dim} (expected {dim}²)")]
    BadShape { dim: usize, len: usize },

    #[error("non-finite matrix or vector entry")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NotConverged { sweeps: usize, off_norm: f64 },

    #[error("invalid factor selection: {0}")]
    InvalidFactors(String),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("observable is not dichotomic: {0}")]
    NotDichotomic(String),

    #[error("outcome {0} is not a label of this measurement")]
    UnknownOutcome(f64),

    #[error("outcome {outcome} has probability {probability:e}; collapse is undefined")]
    ZeroProbabilityOutcome { outcome: f64, probability: f64 },

    #[error("sign triple {0:?} violates its product constraint")]
    ConstraintViolation([i8; 3]),

    #[error("invalid sign value {0}; expected +1 or -1")]
    InvalidSign(i64),

    #[error("index {0} out of range 1..=3")]
    IndexOutOfRange(usize),

    #[error("delta {0} outside (0, 1/9)")]
    InvalidDelta(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
