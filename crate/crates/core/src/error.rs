use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("comparison with non-integer coefficients: {0}")]
    NonIntegerComparison(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Error)]
pub enum SmtError {
    #[error("could not start SMT solver `{path}`: {source}")]
    Spawn {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("SMT protocol violation: {msg}\n--- transcript ---\n{transcript}")]
    Protocol { msg: String, transcript: String },
}

#[derive(Debug, Error)]
pub enum InterpError {
    #[error("transition with infinite cost cannot be executed")]
    InfiniteCost,
    #[error("configuration has {got} values, expected {expected}")]
    Arity { got: usize, expected: usize },
    #[error("no value for temporary `{0}`")]
    MissingTemporary(String),
    #[error("cost or update evaluated to a non-integer")]
    NonInteger,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Smt(#[from] SmtError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("location mismatch: cannot chain `{0}` into `{1}`")]
    LocationMismatch(String, String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
