use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by series construction, decomposition, entropy analysis
/// and file IO.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration or scenario field violates its invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The input series is structurally too short for the requested operation.
    #[error("series too short for {operation}: need at least {needed} samples, got {got}")]
    TooShort {
        operation: &'static str,
        needed: usize,
        got: usize,
    },

    /// Two series that must have equal lengths do not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// The residue condition: not enough extrema to build spline envelopes.
    #[error("not enough extrema for envelope interpolation ({maxima} maxima, {minima} minima)")]
    InsufficientExtrema { maxima: usize, minima: usize },

    /// A sample is NaN or infinite.
    #[error("non-finite sample value {value} at {location}")]
    NonFinite { value: f64, location: String },

    /// Text input failed to parse.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// An IO operation failed; the path is kept for context.
    #[error("io error on `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the error is the residue condition rather than a hard failure.
    pub fn is_residue_condition(&self) -> bool {
        matches!(self, Error::InsufficientExtrema { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
