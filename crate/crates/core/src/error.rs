use thiserror::Error;

/// Errors raised by the group engine, the fusion layer and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("group too large: order exceeds the configured cap of {cap}")]
    GroupTooLarge { cap: usize },

    #[error("element {0} does not lie in the ambient group")]
    ForeignElement(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: usize, p: u64 },

    #[error("not a Sylow {p}-subgroup: order {order}, expected {expected}")]
    NotSylow {
        p: u64,
        order: usize,
        expected: usize,
    },

    #[error("containment violated: {0}")]
    NotContained(String),

    #[error("not closed: {0}")]
    NotClosed(String),

    #[error("ill-formed morphism: {0}")]
    BadMorphism(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cycle notation parse error at column {column}: {message}")]
    CycleParse { column: usize, message: String },

    #[error("corpus parse error at line {line}, column {column}: {message}")]
    CorpusParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("corpus entry `{name}`, generator `{generator}`: column {column}: {message}")]
    InvalidEntry {
        name: String,
        generator: String,
        column: usize,
        message: String,
    },

    #[error("duplicate corpus entry name `{0}`")]
    DuplicateName(String),

    #[error("no corpus entry named `{0}`")]
    UnknownEntry(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
