use std::path::PathBuf;

use crate::linalg::ComplexVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("matrix is rank deficient: {0}")]
    RankDeficient(String),

    #[error("vector must be nonzero: {0}")]
    ZeroVector(&'static str),

    #[error("power iteration did not converge after {iterations} steps (relative residual {residual:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        best: ComplexVector,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("frame {frame} at SNR {snr_db} dB failed: {source}")]
    Frame {
        snr_db: f64,
        frame: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
