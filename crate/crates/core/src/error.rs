use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable context mismatch: {left} vs {right} fibre variables")]
    ContextMismatch { left: usize, right: usize },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    /// A configured computation budget (S-pairs, terms) was exhausted.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// A mathematical hypothesis does not hold for the input; `witness` records why.
    #[error("hypothesis violated: {reason}")]
    Hypothesis { reason: String, witness: Vec<String> },

    /// A correction step of the lifting iteration has no solution.
    #[error("lifting step at order {order} is unsolvable (residual {residual:?})")]
    UnsolvableStep { order: u32, residual: Vec<String> },

    #[error("verification failed at generator {index}: {reason}")]
    Verification { index: usize, reason: String },

    #[error("truncation box too small: {0}")]
    BoxTooSmall(String),
}

impl Error {
    /// Whether this error reports a property of the mathematics rather than of the input or budget.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::Hypothesis { .. } | Error::UnsolvableStep { .. } | Error::Verification { .. }
        )
    }
}
