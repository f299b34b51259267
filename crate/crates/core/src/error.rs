use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a permutation of 1..={n}: {values:?}")]
    NotAPermutation { n: usize, values: Vec<u8> },
    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("invalid area word {0:?}")]
    InvalidAreaWord(Vec<u8>),
    #[error("invalid labelling {labels:?} for area word {area:?}")]
    InvalidLabelling { area: Vec<u8>, labels: Vec<u8> },
    #[error("step {0} is not a contractible valley")]
    NotContractible(usize),
    #[error("{0} does not have schedule 1^n")]
    NotScheduleOne(String),
    #[error("cannot parse decorated permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("parameter {name}={value} outside supported range {lo}..={hi}")]
    OutOfRange {
        name: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
