use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument outside the domain of {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("Bessel K of integer order {order} is not supported")]
    IntegerOrder { order: f64 },

    #[error("{function} did not converge after {terms} terms")]
    NonConvergence {
        function: &'static str,
        terms: usize,
    },

    #[error("{function} overflowed")]
    Overflow { function: &'static str },

    #[error("{function} lost too much precision (relative loss {loss:.3e})")]
    Precision { function: &'static str, loss: f64 },

    #[error("truncation tail {tail:.3e} exceeds tolerance at dim {dim}; increase dim")]
    Truncation { dim: usize, tail: f64 },

    #[error("label is degenerate: {reason}")]
    DegenerateLabel { reason: String },

    #[error("no normalizable solution: {reason}")]
    NoNormalizableSolution { reason: String },

    #[error("continued fraction hits a zero denominator at level {level}")]
    ZeroDivision { level: usize },

    #[error("quadrature did not converge: relative change {change:.3e} on node doubling")]
    Quadrature { change: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
