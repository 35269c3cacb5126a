use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: shape mismatch, left is {left:?}, right is {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("missing gradient for head `{head}`")]
    MissingHeadGradient { head: String },

    #[error("learning rate must be positive, got {0}")]
    InvalidLearningRate(f64),

    #[error("momentum must lie in [0, 1), got {0}")]
    InvalidMomentum(f64),

    #[error("invalid network spec: {0}")]
    InvalidSpec(String),

    #[error("invalid training config: {0}")]
    InvalidConfig(String),

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("class {class} has no examples")]
    EmptyClass { class: usize },

    #[error("invalid cost matrix: {0}")]
    InvalidCostMatrix(String),

    #[error("cost vector for example {row} has nonzero cost {value} at its true class {label}")]
    TrueClassCost { row: usize, label: usize, value: f64 },

    #[error("cost vector has negative or non-finite entry {value} at class {class}")]
    InvalidCost { class: usize, value: f64 },

    #[error("hierarchy tree contains a cycle through node `{node}`")]
    TreeCycle { node: String },

    #[error("hierarchy tree node `{node}` references undefined parent `{parent}`")]
    TreeOrphan { node: String, parent: String },

    #[error("hierarchy tree node `{node}` is declared more than once")]
    TreeDuplicate { node: String },

    #[error("hierarchy tree has no leaves")]
    TreeEmpty,

    #[error("reconstruction entry {value} at ({row}, {col}) is not strictly inside (0, 1)")]
    ReconstructionOutOfRange { row: usize, col: usize, value: f64 },

    #[error("target entry {value} at ({row}, {col}) is outside [0, 1]")]
    TargetOutOfRange { row: usize, col: usize, value: f64 },

    #[error("beta must lie in [0, 1], got {0}")]
    BetaOutOfRange(f64),

    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },

    #[error("IDX file {path}: bad magic number {found:#010x}, expected {expected:#010x}")]
    IdxBadMagic {
        path: String,
        expected: u32,
        found: u32,
    },

    #[error("IDX file {path}: truncated, expected {expected} bytes, found {found}")]
    IdxTruncated {
        path: String,
        expected: usize,
        found: usize,
    },

    #[error("IDX image count {images} does not match label count {labels}")]
    IdxCountMismatch { images: usize, labels: usize },

    #[error("CSV line {line}: expected {expected} fields, found {found}")]
    CsvRagged {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("CSV line {line}, column {column}: cannot parse `{value}`")]
    CsvNonNumeric {
        line: usize,
        column: usize,
        value: String,
    },

    #[error("dataset has no feature columns")]
    NoFeatures,

    #[error("fraction `{name}` must lie in [0, 1], got {value}")]
    InvalidFraction { name: &'static str, value: f64 },

    #[error("invalid class counts: {0}")]
    InvalidCounts(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
