//! Library half of the `robin-gap` binary: configuration, commands, and the
//! deterministic writers. Kept as a library so the acceptance tests can run
//! the commands in-process and compare bytes.

// guards written as `!(x > 0.0)` reject NaN along with the out-of-domain
// values; the suggested `x <= 0.0` would let NaN through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

/// CLI failure classes, carrying the process exit code: usage errors exit
/// with 1, invariant/certificate violations with 2.
#[derive(Debug, Clone)]
pub enum CliError {
    Usage(String),
    Invariant(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
        }
    }
}

impl From<robin_gap::Error> for CliError {
    fn from(e: robin_gap::Error) -> Self {
        match e {
            robin_gap::Error::Domain { .. } | robin_gap::Error::Overflow { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Invariant(e.to_string()),
        }
    }
}
