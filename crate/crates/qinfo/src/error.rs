use thiserror::Error;

/// Crate-wide error type. Variants carry the numbers that triggered them so
/// callers (and the CLI) can report diagnostics without re-deriving anything.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is not Hermitian: max |A - A^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.6e} (tolerance {tol:.3e})")]
    NotPsd { min_eig: f64, tol: f64 },

    #[error("trace is {trace:.12} instead of 1")]
    BadTrace { trace: f64 },

    #[error("invalid parameter: {0}")]
    BadParam(String),

    #[error("coordinates outside the admissible region: {0}")]
    OutOfRegion(String),

    #[error("channel is not trace preserving: max |sum K^dag K - 1| = {deviation:.3e}")]
    NotTracePreserving { deviation: f64 },

    #[error("marginal is singular: eigenvalue {eigenvalue:.6e} at index {index}")]
    SingularMarginal { eigenvalue: f64, index: usize },

    #[error("map is not completely positive: Choi eigenvalue {min_eig:.6e}")]
    NotCompletelyPositive { min_eig: f64 },

    #[error("encoder is not an isometry: max |V^dag V - 1| = {deviation:.3e}")]
    NotIsometric { deviation: f64, gram: Box<crate::mat::CMat> },

    #[error("operator norm bound violated: eigenvalue {eig:.6} outside [-1, 1]")]
    NormBound { eig: f64 },

    #[error("state is rank deficient: eigenvalue {eigenvalue:.3e} too small for the solve")]
    RankDeficient { eigenvalue: f64 },

    #[error("iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("quantity unavailable: {0}")]
    Unavailable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("zero success probability: branch weight {prob:.3e}")]
    ZeroProbability { prob: f64 },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
