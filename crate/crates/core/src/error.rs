use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("k = {k} exceeds the enumeration limit {limit}")]
    OracleLimit { k: u64, limit: u64 },

    #[error("{what} = {value} is not divisible by {divisor}")]
    NotDivisible {
        what: &'static str,
        value: String,
        divisor: u32,
    },

    #[error("{op} requires {requirement} (got k = {k})")]
    Precondition {
        op: &'static str,
        requirement: &'static str,
        k: u64,
    },

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),

    #[error("sample count must be at least 2 (got {0})")]
    TooFewSamples(u64),
}
