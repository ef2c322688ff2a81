use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix is not semisimple")]
    NotSemisimple,
    #[error("unsupported eigenvalues: {0}")]
    UnsupportedEigenvalues(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("no stabilization up to degree {max_degree}")]
    NoStabilization { max_degree: u32 },
    #[error("update {index} is not invertible")]
    NonInvertibleUpdate { index: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("soundness check failed: {0}")]
    Unsound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
