use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller combined arguments in a way the operation does not support.
    #[error("usage error: {0}")]
    Usage(String),

    /// The combinatorial instance has no feasible solution.
    #[error("infeasible instance: {0}")]
    Infeasible(String),

    /// A supplied solution is not feasible for its instance.
    #[error("infeasible solution: {0}")]
    Feasibility(String),

    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: usize },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("solver backend error: {message}")]
    Backend { message: String, output: String },

    /// Algorithm 1 made no progress while its bounds still disagree.
    #[error("row generation stalled: {0}")]
    Stall(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn backend(message: impl Into<String>) -> Self {
        Error::Backend {
            message: message.into(),
            output: String::new(),
        }
    }
}
