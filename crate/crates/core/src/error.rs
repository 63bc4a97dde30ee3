use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("field exponent must be positive")]
    InvalidExponent,
    #[error("field table too large: q^2 = {0} exceeds 2^24")]
    TableTooLarge(u64),
    #[error("element {0:?} does not generate the multiplicative group")]
    NotAGenerator((u32, u32)),
    #[error("element code {0} is outside the base field")]
    NotInField(u32),
    #[error("place 0 is ramified and cannot be a direction")]
    ZeroPlace,
    #[error("exponents {i} and {j} lie in the same norm class mod q-1")]
    SameNormClass { i: u32, j: u32 },
    #[error("unknown letter: {0}")]
    UnknownLetter(String),
    #[error("relation is not central: {0}")]
    RelationNotCentral(String),
    #[error("generator set for p = {p} has {found} classes, expected {expected}")]
    CardinalityMismatch { p: u64, expected: usize, found: usize },
    #[error("no square completes the corner {0}")]
    NoSolution(String),
    #[error("several squares complete the corner {0}")]
    MultipleSolutions(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("dimension mismatch: cannot compose [{0}] -> .. with .. -> [{1}]")]
    DimensionMismatch(usize, usize),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("cyclic set size {0} must be even and positive")]
    OddSize(usize),
    #[error("link condition fails at {0} corners")]
    LinkFailure(usize),
    #[error("the place 2 is ramified in the Hurwitz algebra")]
    RamifiedPlace,
    #[error("place {0} belongs to S")]
    PlaceInS(String),
    #[error("polynomial is reducible")]
    Reducible,
    #[error("bad place: {0}")]
    BadPlace(String),
    #[error("generator image is not invertible: {0}")]
    NonInvertibleImage(String),
    #[error("unknown direction {0}")]
    UnknownDirection(usize),
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("matrix of order {0} exceeds the dense eigensolver cap")]
    MatrixTooLarge(usize),
    #[error("invalid input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
