use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("division by the zero rotation (a² + b² = 0)")]
    DivisionByZeroRotation,

    /// The companion transform `T` is singular when the point lies on the real axis.
    #[error("point {0} lies on the real axis; companion form is undefined")]
    RealAxisPoint(f64),

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("polynomial evaluates to zero at ({re}, {im})")]
    EvaluationAtRoot { re: f64, im: f64 },

    #[error("denominator vanishes at omega = {0}")]
    PoleOnGrid(f64),

    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("expected a positive integer, got {0}")]
    NonPositive(i64),

    #[error("coefficient matrix is identically zero")]
    ZeroMatrix,

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("invalid time constant {0}: must be positive and finite")]
    InvalidTimeConstant(f64),
}
