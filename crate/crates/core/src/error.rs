use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the hull, geometry and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a mathematical operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An experiment or sampling configuration is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    /// A requested computation would exceed a resource cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A result contradicts a contract that should hold by construction.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Parse { .. } => 2,
            Error::Config(_) => 3,
            Error::Precondition(_) | Error::Domain(_) => 3,
            Error::Resource(_) | Error::Contract(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
