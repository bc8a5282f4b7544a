use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IsoError {
    /// An argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The requested work exceeds a hard resource cap.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("config error: {0}")]
    Config(String),

    /// A mathematical invariant failed at runtime. Always a bug or a
    /// counterexample worth keeping.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, IsoError>;

pub(crate) fn domain(msg: impl Into<String>) -> IsoError {
    IsoError::Domain(msg.into())
}
