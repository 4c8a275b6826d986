use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse group spec `{text}`: {reason}")]
    Parse { text: String, reason: String },

    #[error("cyclic factor order must be positive, got {0}")]
    NonPositiveFactor(i64),

    #[error("element has {got} coordinates but the group has {expected} factors")]
    ArityMismatch { expected: usize, got: usize },

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("coloring has {got} entries but the group has order {expected}")]
    ColoringLength { expected: usize, got: usize },

    #[error("progression length must be at least 2, got {0}")]
    InvalidLength(usize),

    #[error("group of order {order} exceeds the exhaustive search bound {bound}")]
    Infeasible { order: usize, bound: usize },

    #[error(
        "odd prime {0} is not classified: it exceeds the search bound and is not in the cache"
    )]
    UnclassifiedPrime(u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("fiber order {0} must be odd")]
    EvenFiber(u64),

    #[error("fiber coloring is not unitary at 0")]
    NotUnitaryAtZero,

    #[error("coloring is not unitary at element {0}")]
    NotUnitaryAt(usize),

    #[error("group {0} is not a 2-group")]
    NotTwoGroup(String),

    #[error("operation requires a nontrivial group")]
    TrivialGroup,

    #[error("fiber split {base} x Z_{fiber} does not match a group of order {order}")]
    InconsistentSplit {
        base: String,
        fiber: u64,
        order: usize,
    },

    #[error(
        "auxiliary coloring undefined: fiber {fiber} has {extra} colors outside the base fiber"
    )]
    AuxUndefined { fiber: usize, extra: usize },

    #[error("construction verification failed on {group}: {detail}")]
    Verification { group: String, detail: String },

    #[error("cannot construct extremal coloring for factor Z_{factor}: {reason}")]
    Unconstructible { factor: u64, reason: String },

    #[error("cache file {path} has schema version {found}, expected {expected}; delete it or point --cache elsewhere")]
    SchemaMismatch {
        path: PathBuf,
        found: u32,
        expected: u32,
    },

    #[error("bad cache key `{0}`")]
    BadCacheKey(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
