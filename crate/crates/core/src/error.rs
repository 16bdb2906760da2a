use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no primitive direction: the zero vector has none")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension unsupported: {found} exceeds the supported maximum {max}")]
    UnsupportedDimension { found: usize, max: usize },

    #[error("not a face: {0}")]
    NotAFace(String),

    #[error("non-pure complex: expected cells of dimension {expected}, found one of dimension {found}")]
    NonPure { expected: usize, found: usize },

    #[error("cone is not pointed (lineality space of dimension {0})")]
    NotPointed(usize),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("complex is not balanced ({0} violations)")]
    Unbalanced(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probe {0} lies outside the dual cone")]
    ProbeOutsideDual(String),

    #[error("zero component at index {0}")]
    ZeroComponent(usize),

    #[error("enumeration budget exceeded: {requested} points requested, limit is {limit}")]
    BudgetExceeded { requested: u128, limit: u128 },

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        partial: Vec<Complex64>,
    },

    #[error("f(z^m) vanished numerically {retries} times (retry budget exhausted)")]
    RetryBudgetExhausted { retries: usize },

    #[error("empty point cloud")]
    EmptyCloud,

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("cannot fit a rate: {0}")]
    Fit(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
