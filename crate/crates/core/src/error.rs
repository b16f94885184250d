use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sign vector: {reason} at index {index}")]
    Parse { index: usize, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("root finder did not converge after {iterations} iterations (worst normalized residual {worst_residual:e})")]
    Convergence { iterations: usize, worst_residual: f64 },

    #[error("numerical consistency check failed: {what} (error {error:e})")]
    NumericalConsistency { what: String, error: f64 },

    #[error("exact oracle refuses a {size}x{size} matrix (limit {limit})")]
    OracleTooLarge { size: usize, limit: usize },

    #[error("n = {n} exceeds the enumeration cap {cap}; raise the cap explicitly to proceed")]
    CapExceeded { n: usize, cap: usize },

    #[error("eigenspace for target index j = {j} is numerically one-dimensional; no witness with x_1 = 0")]
    WitnessDegenerate { j: usize },

    #[error("sign vector has an odd number of -1 entries; apply parity doubling first")]
    OddParity,
}
