use alloc::boxed::Box;
use alloc::string::String;

/// Errors raised by problems, trackers, optimizers and oracles.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty inner batch")]
    EmptyInnerBatch,
    #[error("empty outer batch")]
    EmptyOuterBatch,
    #[error("objective overflow at outer index {index}")]
    ObjectiveOverflow { index: usize },
    #[error("non-finite {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("{objective} denominator underflow ({value:e}) at outer index {index}")]
    DenominatorUnderflow { objective: &'static str, index: usize, value: f64 },
    #[error("inner value {value} outside the outer function's domain at index {index}")]
    InvalidInner { index: usize, value: f64 },
    #[error("p-norm push exponent must exceed 1, got {0}")]
    InvalidExponent(f64),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("tracker row {index} read before initialization")]
    UninitializedRow { index: usize },
    #[error("moap scale overflow at outer index {index}")]
    MoapScaleOverflow { index: usize },
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid batch: {0}")]
    InvalidBatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("pd-sox requires scalar inner value")]
    ScalarInnerRequired,
    #[error("pd-sox requires a monotone convex outer function")]
    NotMonotoneConvex,
    #[error("run aborted at iteration {iteration}: {source}")]
    Aborted { iteration: usize, source: Box<Error> },
    #[error("class {class} has fewer than two members")]
    SingletonClass { class: usize },
    #[error("query {query} has no relevant item")]
    ZeroRelevance { query: usize },
    #[error("query {query} has fewer than two items")]
    QueryTooSmall { query: usize },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("split fraction {0} outside (0, 1)")]
    FractionOutOfRange(f64),
    #[error("no positive labels")]
    NoPositives,
    #[error("enumeration bound exceeded")]
    EnumerationBoundExceeded,
    #[error("reference descent diverged at iteration {iteration}")]
    Divergence { iteration: usize },
    #[error("objective overflow while probing coordinate {coordinate}")]
    ProbeOverflow { coordinate: usize },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
