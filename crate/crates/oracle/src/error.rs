use thiserror::Error;
use tropinflect_core::TropError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Trop(#[from] TropError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("Hessian vanishes identically (the curve contains a line)")]
    ZeroHessian,
    #[error("the curve and its Hessian share a component")]
    CommonFactor,
    #[error("numeric path needs real rational coefficients: {0}")]
    NotReal(String),
    #[error("ill-conditioned at this t: {0}; try a smaller t or more precision")]
    IllConditioned(String),
    #[error("evaluation overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;
