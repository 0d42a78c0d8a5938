use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("truncation overflow: {0}")]
    Truncation(String),
    #[error("bidegree mismatch: expected ({0},{1}), got ({2},{3})")]
    BidegreeMismatch(usize, usize, usize, usize),
    #[error("coefficient domain does not carry powers of h: {0}")]
    HbarRequired(String),
    #[error("negative h-valuation outside localized mode: {0}")]
    NegativeValuation(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` has no rewrite rule in this variant")]
    InertGenerator(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("carrier has no coproduct")]
    NoCoproduct,
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
