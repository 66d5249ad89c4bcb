use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("zero state has no direction")]
    ZeroState,

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("non-finite amplitude or matrix entry")]
    NonFinite,

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("spectral decomposition does not reproduce the operator (residual {residual:e})")]
    Decomposition { residual: f64 },

    #[error("curve needs at least {needed} nodes, got {got}")]
    TooFewNodes { needed: usize, got: usize },

    #[error("curve parameters must be finite and strictly increasing")]
    NonIncreasingGrid,

    #[error("node index {index} out of range for {len} nodes")]
    NodeOutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A model guard that keeps the discretization trustworthy was violated.
    #[error("numerical guard violated: {0}")]
    NumericalGuard(String),

    #[error("empty search range")]
    EmptyRange,

    #[error("no generators to combine")]
    EmptyGenerators,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_numerical_guard(&self) -> bool {
        matches!(self, Error::NumericalGuard(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
