use std::fmt;
use std::process::ExitCode;

/// Failure of a CLI run, each kind with its own exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad or missing configuration. `field` names the offending key.
    Config { field: String, message: String },
    /// A library routine failed; `context` says which method at which point.
    Numeric { context: String, message: String },
    /// The validation suite ran and at least one check failed.
    Validation { failed: usize },
    /// Output could not be written.
    Io { path: String, message: String },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn numeric(context: impl Into<String>, err: impl fmt::Display) -> Self {
        CliError::Numeric {
            context: context.into(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.status())
    }

    pub fn status(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 1,
            CliError::Numeric { .. } => 2,
            CliError::Validation { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => write!(f, "config error in `{field}`: {message}"),
            CliError::Numeric { context, message } => write!(f, "numeric failure in {context}: {message}"),
            CliError::Validation { failed } => write!(f, "validation failed: {failed} check(s) did not pass"),
            CliError::Io { path, message } => write!(f, "cannot write {path}: {message}"),
        }
    }
}

impl std::error::Error for CliError {}
