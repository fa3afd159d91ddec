use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid study config: {0}")]
    InvalidConfig(String),

    #[error("malformed record at line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("length mismatch at line {line}: expected {expected} weights, found {found}")]
    LengthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite weight at line {line}, index {index}")]
    NonFiniteWeight { line: usize, index: usize },

    #[error("non-finite weight at index {index}")]
    NonFinite { index: usize },

    #[error("duplicate key {key} at line {line} (first seen at line {first_line})")]
    DuplicateKey {
        line: usize,
        first_line: usize,
        key: String,
    },

    #[error("unknown {kind} id {id:?}{}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    UnknownId {
        kind: &'static str,
        id: String,
        line: Option<usize>,
    },

    #[error("missing cell (model={model}, view={view}, mode={mode}): no runs recorded")]
    MissingCell {
        model: String,
        view: String,
        mode: String,
    },

    #[error("run ids differ across cells of mode {mode}: ({model}, {view}) has runs {found:?}, expected {expected:?}")]
    RunMismatch {
        mode: String,
        model: String,
        view: String,
        expected: Vec<u64>,
        found: Vec<u64>,
    },

    #[error("threshold k={k} out of range 1..={n_r}")]
    ThresholdOutOfRange { k: usize, n_r: usize },

    #[error("top-k sets have different sizes ({left} vs {right})")]
    ThresholdMismatch { left: usize, right: usize },

    #[error("matrix axis mismatch: {0}")]
    AxisMismatch(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("at least {required} {what} required, got {found}")]
    TooFew {
        what: &'static str,
        required: usize,
        found: usize,
    },

    #[error("invalid synthetic study: {0}")]
    InvalidSpec(String),

    #[error("cannot parse matrix {source_name}: {message}")]
    MatrixParse {
        source_name: String,
        message: String,
    },

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
