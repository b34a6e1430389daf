use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid system shape: {0}")]
    Shape(String),

    #[error("basis label {label} does not fit {parties} parties of dimension {dim}")]
    BadLabel {
        label: String,
        parties: usize,
        dim: usize,
    },

    #[error("zero vector")]
    ZeroVector,

    #[error("operator is not symmetric at ({row}, {col})")]
    NotSymmetric { row: String, col: String },

    #[error("party index {index} out of range for {parties} parties")]
    PartyOutOfRange { index: usize, parties: usize },

    #[error("cannot trace out every party")]
    TraceAll,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("size guard exceeded: {what} needs {needed}, limit is {limit}")]
    Guard {
        what: &'static str,
        needed: String,
        limit: usize,
    },

    #[error("malformed rational `{0}`: expected an integer or p/q")]
    MalformedRational(String),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("not a {k}-mixture: weights at {i} and {j} are only {gap} apart")]
    NotKMixture {
        k: usize,
        i: usize,
        j: usize,
        gap: usize,
    },

    #[error("invalid Dicke combination: {0}")]
    InvalidCombo(String),

    #[error("negative coefficient {value} at index {index}")]
    NegativeCoefficient { index: usize, value: String },

    #[error("family constraint violated: {0}")]
    Family(String),

    #[error("code parse error at line {line}: {msg}")]
    CodeParse { line: usize, msg: String },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no witness: {0}")]
    NoWitness(String),

    #[error("certificate error: {0}")]
    Certificate(String),
}
