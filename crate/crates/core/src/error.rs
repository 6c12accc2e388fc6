use thiserror::Error;

/// Errors raised by graph construction, the path-cover formulas and the oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// The input does not have the shape an operation needs (not a tree, is a path, ...).
    #[error("shape error: {0}")]
    Shape(String),

    /// A formula's hypothesis does not hold; `witness` names the offending vertex or edge.
    #[error("condition violated: {message} (witness: {witness})")]
    Condition { message: String, witness: String },

    /// An argument breaks the contract of the call (e.g. an invalid covering).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Brute force refused to run or gave up; never an approximate answer.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("construction error: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn condition(message: impl Into<String>, witness: impl std::fmt::Display) -> Self {
        Error::Condition {
            message: message.into(),
            witness: witness.to_string(),
        }
    }
}
