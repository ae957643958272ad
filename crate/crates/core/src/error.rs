use thiserror::Error;

/// Errors raised by lattice computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown lattice label `{0}`")]
    UnknownLabel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("lattice is not integral (scale {0})")]
    NotIntegral(String),
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("lattice is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sublattice is not contained in the ambient lattice")]
    NotContained,
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
    #[error("unbounded search: {0}")]
    Unbounded(String),
    #[error("resource exhausted: {0}")]
    ResourceExhausted(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    /// Stable machine-readable code for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownLabel(_) => "unknown_label",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NotIntegral(_) => "not_integral",
            Error::Degenerate => "degenerate",
            Error::NotPositiveDefinite => "not_positive_definite",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotContained => "not_contained",
            Error::ZeroVector => "zero_vector",
            Error::NotPrimitive => "not_primitive",
            Error::LinearlyDependent => "linearly_dependent",
            Error::Unbounded(_) => "unbounded_search",
            Error::ResourceExhausted(_) => "resource_exhausted",
            Error::Overflow(_) => "overflow",
            Error::Verification(_) => "verification_failed",
            Error::Parse { .. } => "parse_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
