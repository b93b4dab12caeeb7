use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] spinmech::Error),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("sweep aborted after {completed} of {total} runs: {first_error}")]
    Sweep { completed: usize, total: usize, first_error: Box<HarnessError> },
}

impl HarnessError {
    pub fn config(msg: impl Into<String>) -> Self {
        HarnessError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    /// Process exit status: 2 configuration, 3 numerical failure,
    /// 4 parametric instability, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Model(e) => match e {
                spinmech::Error::Instability { .. } => 4,
                e if e.is_numerical() => 3,
                spinmech::Error::InvalidParameter(_)
                | spinmech::Error::InvalidDimension(_)
                | spinmech::Error::Unsupported(_) => 2,
                _ => 3,
            },
            HarnessError::Io { .. } => 1,
            HarnessError::Sweep { first_error, .. } => first_error.exit_code(),
        }
    }
}
