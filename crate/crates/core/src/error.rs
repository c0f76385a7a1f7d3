use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<usize>),
    #[error("cell ({row},{col}) lies outside the diagram of {partition}")]
    CellOutsideDiagram {
        row: usize,
        col: usize,
        partition: String,
    },
    #[error("column {col} is not addable to {partition}")]
    NotAddable { col: usize, partition: String },
    #[error("level {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at the evaluation point: factor {factor} vanishes")]
    Pole { factor: String },
    #[error("{inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },
    #[error("{outer}/{inner} is not a horizontal strip")]
    NotHorizontalStrip { outer: String, inner: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("state {0} has probability zero under the alphabet")]
    UnreachableState(String),
    #[error("identity {identity} violated: {counterexample}")]
    IdentityViolated {
        identity: String,
        counterexample: String,
    },
    #[error("enumeration of {count} objects exceeds the limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("distributions live on different levels: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
