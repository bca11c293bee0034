use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// One or more violated configuration constraints.
    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    /// A numerical procedure failed to reach its tolerance.
    #[error("numerical non-convergence: {0}")]
    Numerical(String),

    /// Operation called in a state where it is not defined (e.g. stepping a single particle).
    #[error("logic error: {0}")]
    Logic(String),

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(vec![msg.into()])
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) | Error::Logic(_) => 2,
            Error::Numerical(_) => 3,
            Error::Io { .. } => 4,
        }
    }
}
