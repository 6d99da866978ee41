use std::path::Path;

use star_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or arguments: exit 2.
    Parse(String),
    /// Enumeration or search bound exceeded: exit 3.
    Capacity(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Parse(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Capacity(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity(_) => CliError::Capacity(e.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}
