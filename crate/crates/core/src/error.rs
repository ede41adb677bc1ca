use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a positive integer, got {0}")]
    NonPositive(String),
    #[error("empty argument list")]
    EmptyList,
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("`{name}` is not defined for arity {arity}")]
    UnsupportedArity { name: String, arity: usize },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("unknown table target `{0}`")]
    UnknownTarget(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("function is not tagged multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("not invertible at {witness:?}: {reason}")]
    NotInvertible { witness: Vec<u64>, reason: String },
    #[error("divergence detected: {0}")]
    Divergent(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("incompatible Bell series: {0}")]
    SeriesMismatch(String),
}
