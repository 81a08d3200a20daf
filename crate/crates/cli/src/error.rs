use std::path::PathBuf;

use thiserror::Error;

/// Failures of the command-line front end, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] catenoid::Error),

    #[error("{path}:{line}:{column}: {message}")]
    Config { path: String, line: usize, column: usize, message: String },

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for domain errors, 3 for solver failures, 4 for configuration and I/O problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_domain() => 2,
            CliError::Core(_) => 3,
            CliError::Config { .. } | CliError::Usage(_) | CliError::Io { .. } => 4,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Core(catenoid::Error::Domain("x".into())).exit_code(), 2);
        let solver = catenoid::Error::NonConvergence { what: "brent", detail: String::new() };
        assert_eq!(CliError::Core(solver).exit_code(), 3);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 4);
    }
}
