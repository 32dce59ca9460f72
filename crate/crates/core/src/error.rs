use thiserror::Error;

/// Errors surfaced by the coefficient-space operations.
///
/// Scientific outcomes (divergence of an iteration, an uncertified tail,
/// an unreliable norm) are reported as data, not as errors; only violated
/// preconditions and malformed inputs land here.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on a numeric parameter was violated. The message
    /// names the offending parameter and the inequality it broke.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two objects that must share a discretization do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A time argument fell outside the working grid.
    #[error("time {t} outside grid range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    /// Malformed serialized data.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// JSON encode/decode failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// Byte-level I/O failure while reading or writing a sidecar.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
