use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    /// Unknown suite, bad command line.
    #[error("usage error: {0}")]
    Usage(String),
    /// A parameter outside the range where the verified statement holds.
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] harmspace::Error),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

impl VerifyError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        VerifyError::Io { path: path.into(), source }
    }
}
