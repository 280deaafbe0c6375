use thiserror::Error;

/// Errors produced by the group, norm, and solver operations.
#[derive(Debug, Error)]
pub enum HqError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),

    #[error("sample count must be at least 1")]
    EmptySampleSet,

    #[error("operation requires a degree-1 homogeneous quasi-norm; the box norm is not")]
    UnsupportedFamily,

    #[error("cannot project the identity to a unit sphere")]
    IdentityProjection,

    #[error("quasi-triangle ratio undefined: both operands are the identity")]
    ZeroDenominator,

    #[error("invalid solver parameters: {0}")]
    InvalidSolverParams(String),

    #[error("parse error: {0}")]
    Parse(String),
}
