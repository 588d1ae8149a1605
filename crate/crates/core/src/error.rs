use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable x{index} out of range (s = {s})")]
    VariableOutOfRange { index: usize, s: usize },

    /// Raised by exact division when a remainder survives. Inside fraction-free
    /// elimination this is an internal bug, so both operands are kept.
    #[error("division not exact: ({dividend}) / ({divisor})")]
    DivisionNotExact { dividend: String, divisor: String },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("size guard exceeded: n = {n}, limit = {limit}")]
    SizeGuardExceeded { n: usize, limit: usize },

    #[error("time ceiling exceeded")]
    TimeCeilingExceeded,

    #[error("matrix file line {line}: {msg}")]
    MatrixFormat { line: usize, msg: String },

    #[error("result mismatch between algorithms: {0}")]
    ResultMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
