//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A cell in an input file is missing or not numeric.
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    /// The label column does not contain exactly two distinct values.
    #[error("expected exactly two distinct labels, found {0:?}")]
    Label(Vec<String>),

    /// One of the two groups has no observations.
    #[error("group {0:?} has no observations")]
    EmptyGroup(String),

    /// The requested direction is undefined for this data (e.g. equal
    /// centroids, or a zero classifier weight vector).
    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    /// An iterative solver hit its iteration cap before reaching the
    /// requested optimality tolerance.
    #[error("solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    Solver { residual: f64, iterations: usize },

    /// A statistic's variance denominator is identically zero.
    #[error("zero variance in statistic denominator")]
    ZeroVariance,

    /// Paired statistic requested on samples of unequal size.
    #[error("paired statistic requires m == n, got m={m}, n={n}")]
    Pairing { m: usize, n: usize },

    /// The permutation statistics are constant, so no Gaussian can be fit.
    #[error("permutation statistics are constant; Gaussian fit is undefined")]
    DegenerateNull,

    /// The pooled covariance matrix is singular (or d > N - 2).
    #[error("pooled covariance is singular: {0}")]
    SingularCovariance(String),

    /// A distribution specification violates its own invariants.
    #[error("invalid distribution spec: {0}")]
    Spec(String),

    /// An invalid argument or option combination.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A failure in Monte Carlo replicate `index`.
    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps an error with the Monte Carlo / permutation replicate index
    /// in which it occurred.
    pub fn in_replicate(self, index: usize) -> Error {
        Error::Replicate {
            index,
            source: Box::new(self),
        }
    }
}
