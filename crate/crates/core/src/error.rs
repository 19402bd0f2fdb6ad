use thiserror::Error;

/// Errors raised by the ncball toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet mismatch: {left} letters vs {right} letters")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("letter {letter} out of range for alphabet size {d}")]
    LetterOutOfRange { letter: usize, d: usize },

    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial is zero")]
    ZeroPolynomial,

    #[error("degree {degree} exceeds truncation cutoff {cutoff}")]
    DegreeExceedsCutoff { degree: usize, cutoff: usize },

    #[error("cutoff mismatch: ideal saturated to {ideal}, {requested} requested")]
    CutoffMismatch { ideal: usize, requested: usize },

    #[error("radii must satisfy 0 < x < y, got x = {x}, y = {y}")]
    RadiusOrder { x: f64, y: f64 },

    #[error("row norm {row_norm} is not below the convergence radius {radius}")]
    OutsideBall { row_norm: f64, radius: f64 },

    #[error("kernel dimension jumps from {from} to {to} between t = {t0} and t = {t1}; inspect kernel_dims")]
    DimensionJump {
        index: usize,
        t0: f64,
        t1: f64,
        from: usize,
        to: usize,
    },

    #[error("grid error: {0}")]
    InvalidGrid(String),

    #[error("matrix size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
