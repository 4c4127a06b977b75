use std::fmt;

use serde::Serialize;

/// Exit codes of the `filquiv` binary.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliError {
    /// Machine-readable id, e.g. `validation`, `resource-cap`, `io`.
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn new(id: &str, message: impl Into<String>, exit_code: i32) -> Self {
        CliError {
            error: id.to_string(),
            message: message.into(),
            exit_code,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new("validation", message, EXIT_VALIDATION)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new("parse", message, EXIT_VALIDATION)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new("io", message, EXIT_VALIDATION)
    }

    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostics serialize")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.error, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<filquiv::Error> for CliError {
    fn from(e: filquiv::Error) -> Self {
        let code = match e {
            filquiv::Error::Resource { .. } => EXIT_RESOURCE,
            filquiv::Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_VALIDATION,
        };
        CliError::new(e.id(), e.to_string(), code)
    }
}
