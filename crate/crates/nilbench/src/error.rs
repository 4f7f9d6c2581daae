use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element budget exceeded: {0} elements generated, cap {1}")]
    CapExceeded(usize, usize),
    #[error("budget exceeded during {0}")]
    BudgetExceeded(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {0} out of range for degree {1}")]
    PointOutOfRange(usize, usize),
    #[error("multiplication table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("J-class is not regular")]
    NotRegular,
    #[error("regular factor is not an inverse semigroup over a square sandwich matrix")]
    NotInverseSquare,
    #[error("malformed Rees matrix data: {0}")]
    MalformedRees(String),
    #[error("invalid theta-union representation: {0}")]
    InvalidDelta(String),
    #[error("automaton letter does not act as a partial injection")]
    NotInverse,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("inconsistent link pattern: point {0} repeated with different images")]
    InconsistentPattern(usize),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("unknown gallery member: {0}")]
    UnknownGallery(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
