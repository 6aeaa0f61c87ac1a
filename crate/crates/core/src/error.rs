use thiserror::Error;

/// Errors raised by the exact tropical engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TropError {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("empty polynomial")]
    EmptyPolynomial,
    #[error("degenerate curve: Newton polygon has dimension {0} (a classical line or a point)")]
    DegenerateCurve(usize),
    #[error("cell not found in the dual subdivision: {0}")]
    NotACell(String),
    #[error("curve is singular: {0}")]
    Singular(String),
    #[error("Newton polygon is not a triangle T_d with d >= 2")]
    NotStandardTriangle,
    #[error("curves share a common component")]
    CommonComponent,
    #[error("infeasible divisor: {0}")]
    InfeasibleDivisor(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, TropError>;
