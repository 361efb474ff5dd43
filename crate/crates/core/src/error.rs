use thiserror::Error;

use crate::quantum::QuantumError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid configuration for `{field}`: {reason}")]
    Config { field: &'static str, reason: String },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

impl Error {
    pub fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config { field, reason: reason.into() }
    }
}
