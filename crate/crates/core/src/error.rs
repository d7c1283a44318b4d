use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("empty coefficient list")]
    EmptyPolynomial,

    #[error("leading factor c must be nonzero")]
    ZeroLeadingFactor,

    #[error("degree {found} is too small (need at least {required})")]
    DegreeTooSmall { found: usize, required: usize },

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("root finder did not converge after {iterations} iterations (worst residual ratio {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("nodes {i} and {j} are closer than the separation threshold {threshold:e}")]
    NodesTooClose { i: usize, j: usize, threshold: f64 },

    #[error("node system must contain at least one node")]
    NoNodes,

    #[error("span index {k} outside the valid range {lo}..={hi}")]
    InvalidSpan { k: usize, lo: usize, hi: usize },

    #[error("invalid node index list: {0}")]
    InvalidIndexList(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("fixed points coincide within {0:e}")]
    MultipleFixedPoint(f64),

    #[error("point is not a fixed point (residual {0:e})")]
    NotAFixedPoint(f64),

    #[error("orbit did not converge to the fixed point")]
    DidNotConverge,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
