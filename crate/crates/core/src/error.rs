use thiserror::Error;

/// Errors produced by circuit construction, family checking and parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid wire reference {wire} (circuit has {num_wires} wires)")]
    InvalidReference { wire: usize, num_wires: usize },

    #[error("budget exceeded: estimated cost {cost} exceeds limit {limit} ({what})")]
    BudgetExceeded { what: String, cost: u128, limit: u128 },

    #[error("covering condition violated: {0}")]
    FamilyViolation(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
