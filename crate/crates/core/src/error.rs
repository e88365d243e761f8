use std::path::PathBuf;

use crate::volume::Dims;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: Dims, right: Dims },

    #[error("invalid volume: {0}")]
    InvalidVolume(String),

    #[error("truth mask has no foreground voxels")]
    NoForeground,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unknown sample `{0}`")]
    UnknownSample(String),

    #[error("window of {delta_t} epochs ending at epoch {epoch} reaches before epoch 0")]
    WindowBeforeStart { epoch: u32, delta_t: u32 },

    #[error("sample `{sample}` is missing epochs {missing:?}")]
    IncompleteWindow { sample: String, missing: Vec<u32> },

    #[error("sample sets differ; only in first: {only_in_first:?}, only in second: {only_in_second:?}")]
    SampleSetMismatch {
        only_in_first: Vec<String>,
        only_in_second: Vec<String>,
    },

    #[error("subsets have different sizes ({0} vs {1})")]
    SubsetSizeMismatch(usize, usize),

    #[error("non-finite score for sample `{0}`")]
    NanScore(String),

    #[error("duplicate sample id `{0}`")]
    DuplicateSample(String),

    #[error("{name} = {value} is out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("pruning {fraction} of {n} samples leaves an empty subset")]
    EmptySubset { fraction: f64, n: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("no counterpart for `{0}`")]
    UnmatchedFile(PathBuf),

    #[error("cannot reach dice target {target:.4}; closest attainable is {closest:.4}")]
    Calibration { target: f64, closest: f64 },
}

/// Structured diagnostics for the on-disk formats.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FormatError {
    #[error("bad magic {found:02x?} at offset 0")]
    BadMagic { found: Vec<u8> },

    #[error("unknown dtype byte {0} at offset 4")]
    UnknownDtype(u8),

    #[error("unsupported ndim {0} at offset 5 (expected 2 or 3)")]
    BadNdim(u8),

    #[error("zero-length dimension at offset {offset}")]
    ZeroDim { offset: usize },

    #[error("header truncated: need {needed} bytes, have {available}")]
    TruncatedHeader { needed: usize, available: usize },

    #[error("dims overflow the addressable size")]
    DimsOverflow,

    #[error("payload truncated: expected {expected} bytes after offset {offset}, found {found}")]
    TruncatedPayload {
        offset: usize,
        expected: usize,
        found: usize,
    },

    #[error("{extra} trailing bytes after payload end at offset {offset}")]
    TrailingBytes { offset: usize, extra: usize },

    #[error("mask byte {value} at offset {offset} is not 0 or 1")]
    BadMaskByte { offset: usize, value: u8 },

    #[error("probability {value} at offset {offset} is outside [0, 1]")]
    BadProbability { offset: usize, value: f32 },

    #[error("line {line}: {message}")]
    BadLine { line: usize, message: String },

    #[error("line {line}: dice {value} is outside [0, 1]")]
    DiceOutOfRange { line: usize, value: f64 },

    #[error("duplicate record for ({sample}, epoch {epoch}) at lines {first_line} and {second_line}")]
    DuplicateRecord {
        sample: String,
        epoch: u32,
        first_line: usize,
        second_line: usize,
    },

    #[error("manifest: {0}")]
    Manifest(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
