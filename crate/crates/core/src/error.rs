use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("record {index} out of range for dataset of {len} records")]
    RecordOutOfRange { index: usize, len: usize },

    #[error("invalid swap ({t}, {o}): {reason}")]
    SwapContract {
        t: usize,
        o: usize,
        reason: &'static str,
    },

    #[error("record {record} has value with zero count in attribute {attribute}")]
    ZeroCount { record: usize, attribute: usize },

    #[error("counts sum to {sum} but total is {total}")]
    CountMismatch { sum: u64, total: u64 },

    #[error("k = {k} is out of range for {n} records")]
    InvalidK { k: usize, n: usize },

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("exhaustive search over {candidates} subsets exceeds the cap of {cap}")]
    EnumerationCap { candidates: u128, cap: u128 },

    #[error("dataset has no records")]
    EmptyDataset,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("input is empty")]
    EmptyInput,

    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: {value:?} is not numeric")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("column {0:?} not found")]
    ColumnNotFound(String),

    #[error("bin count must be at least 1")]
    ZeroBins,

    #[error("invalid synthetic spec: {0}")]
    InvalidSynthSpec(&'static str),

    #[error("dataset has no class labels")]
    MissingLabels,

    #[error("label {0:?} does not occur in the dataset")]
    UnknownLabel(String),

    #[error("rare label set is empty")]
    NoRareLabels,

    #[error("top ratio {0} is outside (0, 1]")]
    InvalidRatio(f64),

    #[error("cannot keep {keep} records of class {label:?}: only {available} available")]
    NotEnoughRecords {
        label: String,
        keep: usize,
        available: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
