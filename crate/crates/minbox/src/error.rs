use std::io;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] minbox_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: String, reason: String },
    /// A proven property failed to hold; always an implementation bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// 0 success, 1 bad input or i/o, 2 a proven property failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
