use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedSyntax(String),

    #[error("schema violation in field `{field}`: {reason}")]
    SchemaViolation { field: String, reason: String },

    #[error("negative value in field `{field}`")]
    NegativeValue { field: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("divisor must be positive")]
    NonPositiveDivisor,

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEps(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: String,
        limit: String,
    },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
