use std::path::PathBuf;

use thiserror::Error;
use zeno_core::ZenoError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}: {reason}")]
    ConfigFile {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("column {column}, t/row {row}: probability {value} outside [0, 1] by more than 1e-9")]
    OutOfRange {
        column: String,
        row: usize,
        value: f64,
    },

    #[error(transparent)]
    Numeric(#[from] ZenoError),

    #[error("{failed} self-check(s) failed")]
    SelfCheck { failed: usize },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    /// 1 usage or config, 2 numerics, 3 failed self-check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::ConfigFile { .. } | Self::Io { .. } => 1,
            Self::Numeric(ZenoError::InvalidParameter { .. } | ZenoError::NegativeTime(_)) => 1,
            Self::Numeric(_) | Self::OutOfRange { .. } => 2,
            Self::SelfCheck { .. } => 3,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
