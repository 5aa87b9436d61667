use thiserror::Error;

/// Errors raised by the exact-computation engine.
///
/// The variants are grouped by who is at fault: bad input (`Domain`,
/// `Capacity`, `DimensionMismatch`, `FieldMismatch`, `Singular`, `Parse`),
/// a broken internal invariant (`Internal`), or the environment (`Io`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("size cap exceeded: {what} = {value} > {cap}")]
    Capacity {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operands live over different fields")]
    FieldMismatch,

    #[error("matrix is singular")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// The underlying error with any stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures caused by the caller's input rather than the engine.
    pub fn is_usage(&self) -> bool {
        matches!(
            self.root(),
            Error::Domain(_)
                | Error::Capacity { .. }
                | Error::DimensionMismatch(_)
                | Error::FieldMismatch
                | Error::Singular
                | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
