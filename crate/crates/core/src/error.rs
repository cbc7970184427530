use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("continued fraction must have at least one entry")]
    Empty,

    #[error("entry {index} is {value}; entries must be positive")]
    NonPositiveEntry { index: usize, value: i64 },

    #[error("entry {index} is {value}; this operation needs every entry >= 2")]
    EntryBelowTwo { index: usize, value: u64 },

    #[error("({n}, {q}) is not a coprime pair with 0 < q < n")]
    InvalidPair { n: u64, q: u64 },

    #[error("{0:?} is not admissible")]
    NotAdmissible(Vec<u64>),

    #[error("continued fraction {0:?} is undefined (division by zero)")]
    Undefined(Vec<u64>),

    #[error("{0:?} is not a zero continued fraction")]
    NotZero(Vec<u64>),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cannot blow down entry {index} of {entries:?}: {reason}")]
    BlowDown {
        entries: Vec<u64>,
        index: usize,
        reason: &'static str,
    },

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("length {0} is too small (need at least {1})")]
    LengthTooSmall(usize, usize),

    #[error("{0:?} is not a Wahl chain")]
    NotWahl(Vec<u64>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("cache error: {0}")]
    Cache(String),

    /// A proven statement failed on computed data. Always an implementation
    /// bug, never a property of the input.
    #[error("THEOREM VIOLATION: {0}")]
    TheoremViolation(String),
}

impl Error {
    pub fn is_theorem_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}
