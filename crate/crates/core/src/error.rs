use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector (norm {norm:e})")]
    ZeroVector { norm: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("zero row in Kaczmarz step (norm {norm:e})")]
    ZeroRow { norm: f64 },

    #[error("matrix is not a selfadjoint projection: |P - P*| = {selfadjoint:e}, |P^2 - P| = {idempotent:e}")]
    NotProjection { selfadjoint: f64, idempotent: f64 },

    #[error("projection law has no positive lower bound (smallest eigenvalue {min_eigenvalue:e})")]
    NotUniform { min_eigenvalue: f64 },

    #[error("sandwich condition 1/|A^-1|^2 < sum |A* phi_k|^2 fails: {lower} vs {sum}")]
    Hp0Violated { lower: f64, sum: f64 },

    #[error("matrix is numerically singular (reciprocal condition {rcond:e})")]
    Singular { rcond: f64 },

    #[error("matrix is not row-stochastic: {0}")]
    NotStochastic(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("invalid IFS: {0}")]
    InvalidIfs(String),

    #[error("Gram matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    GramNotPsd { min_eigenvalue: f64 },

    #[error("quadrature tolerance {requested:e} unreachable with {samples} samples (estimated error {estimated:e})")]
    QuadratureBudgetExceeded {
        requested: f64,
        estimated: f64,
        samples: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
