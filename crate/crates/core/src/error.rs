use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("A_{rank} needs at least {needed} stored entries, over the configured cap of {cap}")]
    ResourceLimit { rank: u32, needed: u64, cap: u64 },

    #[error("rank {rank} is not supported (maximum is {max})")]
    RankTooLarge { rank: u32, max: u32 },

    #[error("element {element} is out of range for A_{rank} (must be < {size})")]
    OutOfRange { element: u64, rank: u32, size: u64 },

    #[error(
        "threshold of {element} is undefined in A_{rank}: the row of 2^n - 1 never reaches 2^(n-1)"
    )]
    ThresholdUndefined { element: u32, rank: u32 },

    #[error("signature is undefined for 0")]
    ZeroSignature,

    #[error("{what} needs tables through A_{needed}, but only A_{available} is loaded")]
    InsufficientTables {
        what: String,
        needed: u32,
        available: u32,
    },

    #[error("result not certified: {0}")]
    Uncertified(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("word parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: not a table cache file (bad magic)")]
    BadMagic { path: PathBuf },

    #[error("{path}: unsupported cache format version {found} (expected {expected})")]
    VersionMismatch {
        path: PathBuf,
        found: u8,
        expected: u8,
    },

    #[error("{path}: corrupt table cache: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error("ambiguous enumeration step in interval {interval}: coefficient {coef} matches cofinalities {cofinalities:?}")]
    Ambiguous {
        interval: u32,
        coef: u64,
        cofinalities: Vec<u32>,
    },

    #[error("enumeration of interval {interval} exceeded {cap} steps")]
    IterationCap { interval: u32, cap: u64 },

    #[error("invalid ordinal representation: {0}")]
    InvalidRepresentation(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
