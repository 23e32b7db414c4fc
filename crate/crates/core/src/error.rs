use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{d} is not a unit modulo {modulus}")]
    NotAUnit { d: u64, modulus: u64 },
    #[error("{small} does not divide {large}")]
    NotADivisor { small: u64, large: u64 },
    #[error("elements belong to different fields (K_{left} vs K_{right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("rational function is indeterminate at this point")]
    Indeterminate,
    #[error("series precision insufficient: {0}")]
    InsufficientPrecision(String),
    #[error("no usable reduction prime found for conductor {0}")]
    BadPrime(u64),
    #[error("p-adic precision exhausted")]
    PrecisionExhausted,
    #[error("root finding is not supported over K_{0}")]
    UnsupportedConductor(u64),
    #[error("could not find non-degenerate probe points")]
    DegenerateProbes,
    #[error("degree-one maps have an infinite automorphism group")]
    NonconstantDegreeOne,
    #[error("map must be nonconstant")]
    ConstantMap,
    #[error("field K_{sub} is not a subfield of K_{ambient}")]
    NotASubfield { sub: u64, ambient: u64 },
    #[error("cocycle condition fails: {0}")]
    InvalidCocycle(String),
    #[error("norm of a' does not match the 2-cocycle")]
    NormMismatch,
    #[error("averaging projection did not reach full rank")]
    ProjectionRankDeficient,
    #[error("no composition order of the conic trivializer satisfies the coboundary condition")]
    ConventionMismatch,
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("{0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
