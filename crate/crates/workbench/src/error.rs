use std::path::PathBuf;

use thiserror::Error;

use crate::expr::ParseError;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Core(#[from] chiro_core::Error),

    #[error("expression: {0}")]
    Expr(#[from] ParseError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed file: {0}")]
    MalformedFile(String),

    #[error("record {index}: {reason}")]
    InvalidRecord { index: usize, reason: String },

    #[error("{0}")]
    Usage(String),
}

impl WorkbenchError {
    /// 2 for usage errors (including malformed expressions), 1 for
    /// everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkbenchError::Usage(_) | WorkbenchError::Expr(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = WorkbenchError> = std::result::Result<T, E>;
