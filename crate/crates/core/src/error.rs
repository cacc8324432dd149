use thiserror::Error;

/// Errors raised by the algebra engine and its front ends.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown root system type `{0}`")]
    UnknownType(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("vector {0:?} is not a root of the system")]
    NotARoot(Vec<i32>),
    #[error("roots {0:?} and {1:?} do not sum to a root")]
    NotASum(Vec<i32>, Vec<i32>),
    #[error("insufficient level: binomial degree {degree} needs p^level > {degree}, level is {level}")]
    InsufficientLevel { degree: u64, level: u32 },
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("h-part is not periodic modulo p^{needed}; cannot apply the splitting at level {level}")]
    LevelOverflow { needed: u32, level: u32 },
    #[error("element is not in {0}")]
    NotInSubalgebra(&'static str),
    #[error("not in Z-form: coefficient {0} is not an integer")]
    NotInZForm(String),
    #[error("straightening recursion exceeded depth {0}")]
    RecursionLimit(usize),
    #[error("dimension {dim} exceeds the column cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
    #[error("singular block while solving for {0}")]
    SingularBlock(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
