use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    #[error("quadrature did not converge (bound {bound:e} > tol {tol:e})")]
    NotConverged { bound: f64, tol: f64 },
    #[error("point {x} outside the domain {domain}")]
    Domain { x: f64, domain: String },
    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("kernel is not reflection positive at these points (min eigenvalue {min_eig:e})")]
    NotReflectionPositive { min_eig: f64, witness: Vec<f64> },
    #[error("kernel is not invariant under the reflection")]
    NotTauInvariant,
    #[error("index {0} out of range")]
    Index(usize),
    #[error("derivative order {order} exceeds the available maximum {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("not negative definite: {0}")]
    NotNegativeDefinite(String),
    #[error("not increasing: {0}")]
    NotIncreasing(String),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("not convex: {0}")]
    NotConvex(String),
    #[error("not symmetric: {0}")]
    NotSymmetric(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
