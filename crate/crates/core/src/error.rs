use std::fmt;

use thiserror::Error;

/// Which side of the ordering conditions an index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionSide {
    /// `i = 1..=m`: the single-qubit term dominates its tail.
    Leading,
    /// `j = m+1..=n-1`: the tail dominates the single-qubit term.
    Trailing,
}

impl fmt::Display for ConditionSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionSide::Leading => f.write_str("leading"),
            ConditionSide::Trailing => f.write_str("trailing"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size limit exceeded: {qubits} qubits requested, maximum is {max} (set COHERENCE_MAX_QUBITS to raise it)")]
    SizeLimit { qubits: usize, max: usize },

    #[error("state validation failed: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error in field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(
        "infeasible coherence chain at qubit {index}: required coherence {required} exceeds 1"
    )]
    Infeasible { index: usize, required: f64 },

    #[error("ordering condition violated at index {index} ({side} side): single {single}, tail {tail}, k {k}")]
    ConditionViolated {
        index: usize,
        side: ConditionSide,
        single: f64,
        tail: f64,
        k: f64,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
