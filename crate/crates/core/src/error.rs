use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("undefined value: {0}")]
    Domain(String),

    /// An enumeration would exceed its configured cap.
    #[error("enumeration of {what} needs about {estimate} candidates, cap is {cap}")]
    Resource {
        what: String,
        estimate: u128,
        cap: u128,
    },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable identifier, used by the CLI diagnostics.
    pub fn id(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::Validation(_) => "validation",
            Error::Domain(_) => "domain",
            Error::Resource { .. } => "resource-cap",
            Error::Inconclusive(_) => "inconclusive",
            Error::Parse(_) => "parse",
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
