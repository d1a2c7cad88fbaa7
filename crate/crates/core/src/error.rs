use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The configuration is valid in general but not supported by this
    /// operation (e.g. derivative formulas require unit noise variance).
    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),

    /// The optimization problem has no feasible point.
    #[error("infeasible problem: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
