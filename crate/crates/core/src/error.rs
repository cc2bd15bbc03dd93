use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid root datum: {0}")]
    InvalidDatum(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("coweight {0:?} is not in the Tits cone")]
    NotInTitsCone(Vec<i64>),

    #[error("not a root: {0:?}")]
    NotARoot(Vec<i64>),

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("evaluation at q = 0 of a polynomial with negative exponents")]
    EvalAtZero,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("iteration cap exceeded: {0}")]
    IterationCap(String),

    /// The triangular basis conversion failed to make progress.
    #[error("elimination diagnostic: {0}")]
    Elimination(String),
}
