use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A tabulated weight sequence was queried outside its declared index range.
    #[error("index {index} is outside the tabulated range {lo}..={hi}")]
    IndexOutOfTable { index: i64, lo: i64, hi: i64 },

    /// A single output coefficient of `apply_power` would leave the
    /// representable double range. The log-domain pathway
    /// (`log_norm_power`) must be used instead.
    #[error(
        "coefficient at index {index} has log-magnitude {log_magnitude:.3}, \
         outside the representable range; use log_norm_power"
    )]
    WeightOverflowInCoefficient { index: i64, log_magnitude: f64 },

    /// The operation requires a vector with nonempty support.
    #[error("operation requires a vector with nonempty support")]
    ZeroVector,

    /// A coefficient lookup named an index outside the vector's support.
    #[error("index {0} is not in the support of the vector")]
    IndexNotInSupport(i64),

    /// A window of base indices was empty.
    #[error("window of base indices is empty")]
    EmptyWindow,

    /// A constructor or operation received an out-of-contract parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A textual input (vector literal, weight table, config file) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
