use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field: h = {0} (supported: 1..=7)")]
    UnsupportedField(u32),

    #[error("q = {0} is not a supported even prime power")]
    NotEvenPrimePower(u64),

    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u32 },

    #[error("PG({n}, {q}) exceeds the capacity guard ({reason})")]
    Capacity { n: usize, q: u32, reason: &'static str },

    #[error("unsupported dimension n = {0}")]
    Dimension(usize),

    #[error("degenerate line: both points have index {0}")]
    DegenerateLine(u32),

    #[error("point index {index} out of range (geometry has {points} points)")]
    PointOutOfRange { index: u32, points: usize },

    #[error("invalid coordinates {coords:?}: {reason}")]
    InvalidCoords { coords: Vec<u32>, reason: &'static str },

    #[error("not an arc: points {0:?} are collinear")]
    NotAnArc([u32; 3]),

    #[error("not a cap: points {0:?} are collinear")]
    NotACap([u32; 3]),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("arc of size {k} is outside the unique-completion range for q = {q}")]
    CompletionRange { k: usize, q: u32 },

    #[error("hyperoval extension is not unique: {0}")]
    UniquenessViolation(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
