use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("length error: {0}")]
    Length(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("variable `{found}` at byte {offset} is not allowed here (expected `{expected}`)")]
    WrongVariable {
        found: String,
        expected: String,
        offset: usize,
    },

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("weighted sum is zero; constant is undefined")]
    ZeroSum,

    #[error("cone window contains no grid points")]
    EmptyWindow,

    #[error("singular linear system (pivot {pivot:e} in column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("non-finite value during iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
