use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Instance construction or validation failed.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Schedule construction failed (ragged rows, non-binary entries, ...).
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    /// A vector or matrix did not have the expected dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The scheduling horizon cannot hold the requested structure.
    #[error("horizon too short: need at least {required}, found {found}")]
    HorizonTooShort { required: usize, found: usize },

    /// A configuration or penalty parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The exact solver refused an instance outside its guard rails.
    #[error("exact-search guard: {0}")]
    ExactGuard(String),

    /// A file declared an unsupported format version.
    #[error("unsupported format_version {found} (expected {expected})")]
    FormatVersion { expected: u32, found: u32 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
