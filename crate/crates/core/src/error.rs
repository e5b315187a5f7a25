use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A configuration value is outside its valid range.
    #[error("invalid config `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    /// An operation received input that violates its precondition.
    #[error("{stage}: {reason}")]
    InvalidInput { stage: &'static str, reason: String },

    /// A simulation produced a non-finite value.
    #[error("numerical abort in {stage}: {detail}")]
    NumericalAbort { stage: &'static str, detail: String },
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn input(stage: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            stage,
            reason: reason.into(),
        }
    }

    pub(crate) fn numerical(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::NumericalAbort {
            stage,
            detail: detail.into(),
        }
    }
}
