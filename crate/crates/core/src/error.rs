use thiserror::Error;

/// Errors raised by the library. Every variant is a violated precondition;
/// nothing here is recoverable by retrying.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain: {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("index {name} = {value} is outside its domain: {requirement}")]
    Index {
        name: &'static str,
        value: u64,
        requirement: &'static str,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        requirement,
    }
}

pub(crate) fn index(name: &'static str, value: u64, requirement: &'static str) -> Error {
    Error::Index {
        name,
        value,
        requirement,
    }
}
