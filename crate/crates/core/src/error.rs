use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value out of range: {0}")]
    Range(String),

    #[error("arity mismatch in {context}: expected {expected}, found {found}")]
    ArityMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("domain mismatch in {0}")]
    DomainMismatch(&'static str),

    /// An enumeration would exceed the configured limit. `count` is the
    /// number of objects that would have been materialized.
    #[error("budget exceeded: {what} needs {count} items, limit is {limit}")]
    Budget { what: String, count: u128, limit: u128 },

    #[error("invalid scheme: {0}")]
    Scheme(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
