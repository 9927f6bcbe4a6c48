use std::fmt;
use std::process::ExitCode;

use sextic_core::Error;

/// A failure that ends the process: input problems exit with 2, numerical
/// failures with 3.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError::Input(message.into())
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Input(_) => "InvalidInput",
            CliError::Io(_) => "Io",
            CliError::Core(e) => e.name(),
        }
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, CliError::Core(e) if e.is_numerical())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(if self.is_numerical() { 3 } else { 2 })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
