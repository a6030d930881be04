use thiserror::Error;

use bec_scatter::ErrorKind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("missing required field `{0}`")]
    MissingField(&'static str),

    #[error("field `{field}`: cannot read `{value}` (expected units: {expected})")]
    UnitMismatch {
        field: String,
        value: String,
        expected: String,
    },

    #[error("field `{field}`: {reason}")]
    Invalid { field: String, reason: String },

    #[error(transparent)]
    Core(#[from] bec_scatter::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<String>, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Config => 2,
                ErrorKind::Domain => 3,
                ErrorKind::Numerical => 4,
            },
            CliError::Io { .. } => 5,
            _ => 2,
        }
    }

    /// Stable machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "config.parse",
            CliError::UnknownKey(_) => "config.unknown_key",
            CliError::MissingField(_) => "config.missing_field",
            CliError::UnitMismatch { .. } => "config.unit",
            CliError::Invalid { .. } => "config.invalid",
            CliError::Core(e) => match e.kind() {
                ErrorKind::Config => "config.preset",
                ErrorKind::Domain => "domain",
                ErrorKind::Numerical => "numerical",
            },
            CliError::Io { .. } => "io",
        }
    }

    /// One-line diagnostic: `error[<tag>] exit=<code>: <message>`.
    pub fn diagnostic(&self, color: bool) -> String {
        let head = if color {
            "\x1b[1;31merror\x1b[0m"
        } else {
            "error"
        };
        let message = self.to_string().replace('\n', " ");
        format!(
            "{head}[{}] exit={}: {message}",
            self.tag(),
            self.exit_code()
        )
    }
}
