use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum QrvmError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("non-finite value in distribution function at t = {t}")]
    NonFinite { t: f64 },

    #[error("blow-up detected at t = {t}: max |f| = {max_abs:.3e}")]
    BlowUp { t: f64, max_abs: f64 },

    #[error("scheme/state mismatch: {0}")]
    SchemeMismatch(String),

    #[error("time step {dt} rejected: {why}")]
    InvalidTimeStep { dt: f64, why: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed snapshot: {0}")]
    SnapshotFormat(String),
}

impl QrvmError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QrvmError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, QrvmError>;
