use std::fmt;

use superatom::Error;

/// Failure classes with fixed process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Io,
    Validation,
    Resource,
    Numerical,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Io => 1,
            Kind::Validation => 2,
            Kind::Resource => 3,
            Kind::Numerical => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Io => "io",
            Kind::Validation => "validation",
            Kind::Resource => "resource",
            Kind::Numerical => "numerical",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError { kind: Kind::Validation, message: msg.into() }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError { kind: Kind::Io, message: msg.into() }
    }

    /// One JSON object on one line, for scripts.
    pub fn machine_line(&self) -> String {
        serde_json::json!({ "error": self.kind.as_str(), "exit_code": self.kind.exit_code(), "message": self.message })
            .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind.as_str(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::ResourceLimit { .. } => Kind::Resource,
            Error::Stiffness { .. } | Error::NonConvergence { .. } | Error::NoOscillation(_) | Error::Linalg(_) => {
                Kind::Numerical
            }
            _ => Kind::Validation,
        };
        CliError { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
