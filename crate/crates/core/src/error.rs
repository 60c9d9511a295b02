use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid builder parameters: {0}")]
    InvalidBuilder(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("determinant is identically zero")]
    SingularDeterminant,
    #[error("singular matrix at evaluation point")]
    SingularPoint,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("integrand is not projective: {0}")]
    NonProjective(String),
    #[error("tropical measure diverges: {0}")]
    Divergent(String),
    #[error("too many variables: {0} (limit {1})")]
    TooManyVariables(usize, usize),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("non-finite value at sample point {0}")]
    NonFinite(String),
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    #[error("invalid expression: {0}")]
    Expression(String),
    #[error("zero standard error with mean different from target")]
    ZeroStderr,
    #[error("certificate verification failed: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
