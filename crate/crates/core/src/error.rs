use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("operation not supported on this backend: {0}")]
    BackendUnsupported(String),
    #[error("infinite product diverges: {0}")]
    DivergentProduct(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("empty polynomial")]
    EmptyPolynomial,
    #[error("evaluation at zero with negative exponents present")]
    PoleAtZero,
    #[error("unknown operator {0:?}")]
    UnknownOperator(String),
    #[error("input is not symmetric")]
    NotSymmetric,
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("the anti-symmetric isotype of degree 0 is zero")]
    EmptyIsotype,
    #[error("normalization failure: {0}")]
    NormalizationFailure(String),
    #[error("weight evaluated at a pole: {0}")]
    PoleEvaluation(String),
    #[error("parameters outside the unit-circle contour regime: {0}")]
    ContourUnsupported(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),
    #[error("pole identification failed: {0}")]
    PoleIdentificationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
