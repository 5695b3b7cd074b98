use std::fmt;
use std::path::Path;

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable inputs, or a library error (exit 2).
    Config(String),
    /// A reproduced experiment missed its pinned expectation (exit 1).
    Mismatch(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Mismatch(_) => 1,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Config(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "error: {m}"),
            CliError::Mismatch(m) => write!(f, "expectation mismatch: {m}"),
        }
    }
}

/// Prefixes a library error with the argument it came from.
pub fn at<E: fmt::Display>(field: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Config(format!("{field}: {e}"))
}
