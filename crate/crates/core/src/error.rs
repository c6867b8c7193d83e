//! Error taxonomy shared across the crate.
//!
//! Every failure maps to one of four classes so the CLI can translate it
//! into a stable exit code: usage/config (1), data/validation (2),
//! numerical failure (3).

use thiserror::Error;

/// Shape/dimension violations raised by tensor and layer operations.
#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("{op}: axis {axis} mismatch: expected {expected}, got {got}")]
    AxisMismatch {
        op: &'static str,
        axis: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{op}: input too small along {axis}: need at least {need}, got {got}")]
    TooSmall {
        op: &'static str,
        axis: &'static str,
        need: usize,
        got: usize,
    },
    #[error("{op}: data length {len} does not match shape {shape:?}")]
    LengthMismatch {
        op: &'static str,
        shape: Vec<usize>,
        len: usize,
    },
    #[error("{op}: rank mismatch: expected {expected}-d input, got {got}-d")]
    RankMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },
}

/// Invalid data: malformed files, calendar violations, missing sources.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: u64,
        reason: String,
    },
    #[error("{path}: duplicate date {date}")]
    DuplicateDate { path: String, date: String },
    #[error("{path}: dates not strictly increasing at {date}")]
    NonMonotoneDates { path: String, date: String },
    #[error("missing required source series '{name}'")]
    MissingSource { name: String },
    #[error("series '{name}': missing value after warm-up at {date}")]
    InteriorMissing { name: String, date: String },
    #[error("{reason}")]
    Invalid { reason: String },
}

/// Numerical failures: non-finite values, non-convergence.
#[derive(Debug, Error)]
pub enum NumericError {
    #[error("non-finite {what} at {context}")]
    NonFinite { what: String, context: String },
    #[error("{what} did not converge: {detail}")]
    NoConvergence { what: String, detail: String },
    #[error("gradient check failed: {detail}")]
    GradCheck { detail: String },
}

/// Bad arguments or configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown configuration key '{key}'")]
    UnknownKey { key: String },
    #[error("invalid value for '{key}': {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("{reason}")]
    Invalid { reason: String },
}

/// Top-level error for the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl Error {
    pub fn invalid_data(reason: impl Into<String>) -> Self {
        Error::Data(DataError::Invalid {
            reason: reason.into(),
        })
    }

    pub fn invalid_config(reason: impl Into<String>) -> Self {
        Error::Config(ConfigError::Invalid {
            reason: reason.into(),
        })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
