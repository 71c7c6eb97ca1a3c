use thiserror::Error;

/// Error type shared by every tensor, spectral, and decomposition operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TuckerError {
    #[error("invalid shape {shape:?}: need at least one mode, every extent positive")]
    BadShape { shape: Vec<usize> },

    #[error("data length {got} does not match the shape product {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at flat position {index}")]
    NonFinite { index: usize },

    #[error("index {index:?} out of range for shape {shape:?}")]
    IndexOutOfRange { index: Vec<usize>, shape: Vec<usize> },

    #[error("mode {mode} out of range for order {order}")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch { expected: Vec<usize>, got: Vec<usize> },

    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("requested {requested} singular vectors from a matrix with {rows} rows")]
    BadTruncation { requested: usize, rows: usize },

    #[error("rank {rank} out of range for extent {extent} in mode {mode}")]
    RankOutOfRange {
        mode: usize,
        rank: usize,
        extent: usize,
    },

    #[error("matrix is not columnwise orthonormal (max deviation {max_deviation:e})")]
    NotOrthonormal { max_deviation: f64 },

    #[error("factor {index} is not columnwise orthonormal (max deviation {max_deviation:e})")]
    FactorNotOrthonormal { index: usize, max_deviation: f64 },

    #[error("mode order {order:?} is not a permutation of the tensor modes")]
    BadModeOrder { order: Vec<usize> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration of {size} subset tuples exceeds the limit {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, TuckerError>;
