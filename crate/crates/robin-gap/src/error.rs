use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the supported domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A sign change could not be found in the scan window.
    #[error("bracket failure in {op}: no sign change in [{lo}, {hi}]")]
    BracketFailure { op: &'static str, lo: f64, hi: f64 },

    /// A structural invariant (interlacing, certified bound, internal
    /// identity) failed; this indicates a bug, not bad input.
    #[error("invariant violation in {op}: {msg}")]
    InvariantViolation { op: &'static str, msg: String },

    /// Two independent evaluation routes disagreed beyond tolerance.
    #[error("precision loss in {op}: routes disagree ({a} vs {b}, rel {rel:.3e})")]
    PrecisionLoss {
        op: &'static str,
        a: f64,
        b: f64,
        rel: f64,
    },

    /// A truncated sum is not Cauchy within its declared tail bound.
    #[error("divergence in {op}: {msg}")]
    Divergence { op: &'static str, msg: String },

    /// The truncation tail could not be certified below the reported value.
    #[error("tail certificate failure in {op}: tail bound {tail:.3e} vs value {value:.3e} (increase n_max)")]
    TailCertificate {
        op: &'static str,
        tail: f64,
        value: f64,
    },

    /// Coupling too large for the floating-point guards.
    #[error("overflow guard in {op}: beta = {beta:.3e} exceeds 1e12")]
    Overflow { op: &'static str, beta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub(crate) fn invariant(op: &'static str, msg: impl Into<String>) -> Self {
        Error::InvariantViolation {
            op,
            msg: msg.into(),
        }
    }
}
