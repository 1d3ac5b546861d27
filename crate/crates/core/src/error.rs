use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("geometry PG({projective_dim},{q}) exceeds the configured limits: {reason}")]
    GeometryTooLarge { projective_dim: usize, q: u32, reason: String },

    #[error("invalid dimension k = {0}; need k >= 2")]
    InvalidDimension(usize),

    #[error("field element {value} out of range for GF({q})")]
    ElementOutOfRange { value: u32, q: u32 },

    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("point index {index} out of range for a geometry with {points} points")]
    PointOutOfRange { index: usize, points: usize },

    #[error("the zero vector is not a projective point")]
    ZeroVector,

    #[error("span of an empty point set")]
    EmptySpan,

    #[error("subspace does not belong to this geometry")]
    ForeignSubspace,

    #[error("point sets belong to different geometries")]
    GeometryMismatch,

    #[error("operation requires PG({expected_dim},{expected_q}), got PG({found_dim},{found_q})")]
    WrongGeometry { expected_dim: usize, expected_q: u32, found_dim: usize, found_q: u32 },

    #[error("operation requires a point set of size {expected}, got {found}")]
    WrongSize { expected: usize, found: usize },

    #[error("generator matrix has rank {rank}, expected k = {k}")]
    RankDeficient { rank: usize, k: usize },

    #[error("generator column {0} is the zero vector (degenerate code)")]
    DegenerateCode(usize),

    #[error("point set spans a subspace of rank {rank}, expected {k}")]
    NonSpanning { rank: usize, k: usize },

    #[error("vector is not a codeword of this code")]
    NotACodeword,

    #[error("code length {0} exceeds the supported maximum of 64")]
    CodeTooLong(usize),

    #[error("{what} needs {required} steps, budget is {budget}")]
    BudgetExceeded { what: &'static str, required: u128, budget: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
