use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the lab.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("sequence is identically zero")]
    ZeroSequence,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The spectral parameter coincides with an eigenvalue `i f(n)` of the truncation.
    #[error("lambda = {re}{im:+}i lies on the spectrum (index n = {index})")]
    SpectrumPoint { re: f64, im: f64, index: usize },

    #[error("power iteration did not converge after {iterations} iterations (relative change {change:e})")]
    NoConvergence { iterations: usize, change: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    /// A failure inside a scan, tagged with the grid point where it happened.
    #[error("at {point}: {source}")]
    AtPoint {
        point: String,
        #[source]
        source: Box<LabError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn out_of_range(msg: impl Into<String>) -> LabError {
    LabError::OutOfRange(msg.into())
}

pub(crate) fn at_point(name: &str, value: f64) -> impl Fn(LabError) -> LabError + '_ {
    move |e| LabError::AtPoint {
        point: format!("{name} = {value}"),
        source: Box::new(e),
    }
}
