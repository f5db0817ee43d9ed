use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Bad caller input. `field` names the offending parameter.
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An exact identity that must hold did not; indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// The hypothesis of a verified statement is not satisfied by the input.
    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
}

impl Error {
    pub(crate) fn input(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
