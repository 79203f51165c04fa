use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),

    #[error("not a parameter ideal: quotient has infinite length ({witness})")]
    NotParameter { witness: String },

    #[error("infinite length: {0}")]
    InfiniteLength(String),

    #[error("Hilbert polynomial did not stabilize within n = {bound}; raise the bound")]
    NotStabilized { bound: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("random generation failed after {attempts} attempts: {reason}")]
    RetryExhausted { attempts: usize, reason: String },

    #[error("colon by the zero element")]
    ZeroColon,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Name of the engine layer that raised the error, for diagnostics.
    pub fn origin(&self) -> &'static str {
        match self {
            Error::RingMismatch(_) | Error::Parse { .. } => "poly-core",
            Error::Inhomogeneous(_) | Error::ZeroColon => "gb-engine",
            Error::NotParameter { .. } | Error::NotStabilized { .. } | Error::InfiniteLength(_) => "hilbert-engine",
            Error::RetryExhausted { .. } => "sampler",
            Error::Precondition(_) | Error::Internal(_) => "engine",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
