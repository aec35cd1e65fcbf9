use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request exceeds a documented size limit of an exact algorithm.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A structural guarantee of common edge graphs was violated. This can
    /// only happen on hand-forged inputs; graphs built from genuine
    /// edge-ordered triples always satisfy the run structure.
    #[error("common edge graph integrity violated: {0}")]
    Integrity(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
