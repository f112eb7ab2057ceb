use std::io;

use thiserror::Error;

/// Errors raised anywhere in the laboratory.
///
/// The variants are grouped so a front end can map them onto exit codes:
/// [`Error::Integrity`] and [`Error::NotStabilized`] are numerical-integrity
/// failures, [`Error::Capacity`] is a counter or size overflow.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical integrity violated: {0}")]
    Integrity(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("local density at p = {p} did not stabilize by level {h_max}")]
    NotStabilized { p: u64, h_max: u32 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures that indicate a numerical or logical inconsistency.
    pub fn is_integrity(&self) -> bool {
        matches!(self, Error::Integrity(_) | Error::NotStabilized { .. })
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
