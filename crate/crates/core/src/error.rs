use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("series did not converge within {terms} terms")]
    NonConvergent { terms: usize },
    #[error("precision exhausted at {bits} bits: {what}")]
    PrecisionExhausted { bits: u32, what: String },
    #[error("division by a series that vanishes to order {0}")]
    DivisionByZeroSeries(usize),
    #[error("invalid series operation: {0}")]
    InvalidSeries(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown bound family `{0}`")]
    UnknownFamily(String),
    #[error("unknown series `{0}`")]
    UnknownSeries(String),
    #[error("function `{0}` needs a parameter")]
    ParamRequired(String),
    #[error("no claim `{0}`")]
    NoSuchClaim(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("negative control `{0}` passed; the checker is unsound")]
    SelfTestFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
