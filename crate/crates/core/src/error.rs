use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the range where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// An integrand produced a non-finite value.
    #[error("evaluation error: non-finite value {value} at node {node}")]
    Evaluation { node: f64, value: f64 },
    /// The requested configuration is not one the library knows how to verify.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
