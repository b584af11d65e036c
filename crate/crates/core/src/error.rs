use thiserror::Error;

/// Errors produced by the codec, the analysis routines and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight set: {0}")]
    InvalidWeightSet(String),
    #[error("invalid degree distribution: {0}")]
    InvalidDegreeDistribution(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("check degree {degree} exceeds enumeration bound {bound}")]
    UnsupportedDegree { degree: usize, bound: usize },
    #[error("non-finite observation at index {0}")]
    NonFiniteObservation(usize),
    #[error("brute-force search over {0} variables refused (limit {1})")]
    TooManyVariables(usize, usize),
    #[error("enumeration of {0} cases exceeds cap {1}; use Monte Carlo mode")]
    EnumerationCap(u128, u128),
    #[error("degenerate equation: every sign vector sums to zero")]
    DegenerateEquation,
    #[error("no weight set found after {0} candidates")]
    NoSolutionFound(usize),
    #[error("malformed parity-check file: {0}")]
    ParseParity(String),
    #[error("malformed config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
