use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("window of {n} samples does not fit a series of length {len}")]
    WindowTooLong { n: usize, len: usize },

    #[error("window length must be at least one sample")]
    ZeroWindow,

    #[error("exponent p must be finite and positive, got {0}")]
    InvalidExponent(f64),

    #[error("non-finite value at index {index}")]
    NonFiniteInput { index: usize },

    #[error("series is empty")]
    EmptySeries,

    #[error("sample spacing must be finite and positive, got {0}")]
    InvalidSpacing(f64),

    #[error("impulse period must be at least 1")]
    InvalidPeriod,

    #[error("length {len} is shorter than the period {n}")]
    LengthTooShort { n: usize, len: usize },

    #[error("partition sums to {total} samples but the series has only {len}")]
    PartitionTooLong { total: usize, len: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("expected the smaller scale first, got {small} >= {large}")]
    BadOrder { small: f64, large: f64 },

    #[error("scale ladder is empty")]
    EmptyLadder,

    #[error("interval length must be finite and positive, got {0}")]
    InvalidLength(f64),

    #[error("step function has no pieces")]
    EmptySupport,

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("bump width must be finite and positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("no counterexample for T={t}, S={s}: need T < S with S/T not an integer")]
    NotACounterexampleCase { t: f64, s: f64 },

    #[error("grid step must be finite and positive, got {0}")]
    InvalidGrid(f64),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("timestamps are not strictly increasing at row {row}")]
    NonMonotoneTime { row: usize },

    #[error("timestamps are irregular and no resample step was given")]
    IrregularSamplingWithoutResample,

    #[error("series needs at least 2 samples, got {0}")]
    TooShort(usize),

    #[error("invalid monitor config: {0}")]
    InvalidConfig(String),

    #[error("window {window}s is {ratio} samples at dt={dt}; rounding would change it by more than 1%")]
    WindowConversion { window: f64, dt: f64, ratio: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
