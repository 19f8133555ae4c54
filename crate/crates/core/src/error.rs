use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("{what} needs {needed} elements, limit is {limit}")]
    SizeBound {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("domain mismatch: {0}")]
    Domain(String),
    #[error("identity set is not linear")]
    NonLinear,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn bound(what: &'static str, needed: u128, limit: usize) -> Self {
        Error::SizeBound {
            what,
            needed,
            limit: limit as u128,
        }
    }
}
