//! Error type shared across the toolkit.

use std::path::PathBuf;

use crate::descent::RunTrace;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes the toolkit reports.
///
/// Configuration and argument problems are separated from numerical failures
/// so callers (in particular the CLI) can map them to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two vectors (or a vector and an objective) disagree on dimension.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A benchmark name not present in the registry.
    #[error("unknown benchmark `{name}` (known: {known})")]
    UnknownBenchmark { name: String, known: String },

    /// The operation needs metadata (gradient, minimizer) the objective lacks.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A pluggable component broke its contract (e.g. a direction estimator
    /// returned a vector that is not unit-norm).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// An iterate stopped being finite. The trace up to the failing
    /// iteration is preserved so the run can still be reported.
    #[error("numerical failure at iteration {iter}: {reason}")]
    NumericalFailure {
        iter: u64,
        reason: String,
        trace: Box<RunTrace>,
    },

    /// A bad experiment configuration; the message names the offending field.
    #[error("configuration error: {0}")]
    Config(String),

    /// Filesystem trouble while reading a config or writing a trace.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
