use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field order {p}^{m} exceeds the cap of {cap}")]
    FieldTooLarge { p: u32, m: u32, cap: u64 },
    #[error("element {value} is outside the field of order {order}")]
    ElementOutOfRange { value: u64, order: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("dimension {dim} out of range: {reason}")]
    DimensionOutOfRange { dim: usize, reason: String },
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("{what} needs {needed}, above the cap of {cap} (raise it through KUF_CAPS)")]
    CapExceeded { what: &'static str, needed: u128, cap: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("array is not irredundant for k = {k}: {criterion}")]
    NotIrredundant { k: usize, criterion: &'static str },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid column selection: {0}")]
    InvalidColumns(String),
    #[error("target length {target} outside the admissible window [{low}, {high}]")]
    TrimWindow { target: usize, low: usize, high: usize },
    #[error("state norm is {found}, expected {expected}")]
    NormViolation { found: String, expected: String },
    #[error("state is not {k}-uniform")]
    NotUniform { k: usize },
    #[error("marginal of party {party} is not maximally mixed")]
    SplitNotMaximallyMixed { party: usize },
    #[error("images are not orthonormal: <psi_{s}|psi_{t}> = {value}")]
    NotOrthonormal { s: usize, t: usize, value: String },
    #[error("no implemented construction for (k={k}, d={d}, N={n}): {reason}")]
    Unsupported { k: usize, d: u32, n: usize, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
