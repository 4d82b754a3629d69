//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by statistics, loss kernels, cutoff inference, and the
/// training harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed arguments: mismatched lengths, empty batches, out-of-range
    /// parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A sample too degenerate to carry the requested statistic (e.g. the
    /// unbiased standard deviation of a single point, or zero variance where
    /// a positive scale is required).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// Not enough data points to perform a fit.
    #[error("{0}")]
    InsufficientData(String),

    /// Two identical distributions were given where distinct ones are needed.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A numerical fit did not produce a usable optimum.
    #[error("fit failed: {0}")]
    FitFailed(String),

    /// Root bracketing failed: f has the same sign at both bracket ends.
    /// Callers decide the fallback.
    #[error("no sign change over bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    /// Training produced a non-finite loss.
    #[error("training diverged at epoch {epoch}")]
    TrainingDiverged { epoch: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
