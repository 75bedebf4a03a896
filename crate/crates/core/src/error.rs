use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{0}: zero is not a valid argument")]
    Zero(&'static str),

    #[error("{0}: units are not a valid argument")]
    Unit(&'static str),

    #[error("{0}: an odd Gaussian integer is required, got {1}")]
    NotOdd(&'static str, String),

    #[error("cannot parse {0:?} as a Gaussian integer")]
    Parse(String),

    #[error("invalid Mordell instance: {0}")]
    InvalidInstance(String),

    #[error("no unit rotation places ({0}, {1}) in G")]
    NoRotation(String, String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("not a solution: {0}")]
    NotASolution(String),

    #[error("divisibility profile violated: {0}")]
    Profile(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
