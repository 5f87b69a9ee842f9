use thiserror::Error;

/// Errors raised by the numerical kernels and the pipeline built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// The input data cannot come from a function of the bounded class.
    #[error("class violation: {0}")]
    ClassViolation(String),

    /// Not enough Taylor coefficients for the requested order.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Two bodies coincide (or come closer than the configured floor).
    #[error("singular configuration: {0}")]
    Singular(String),

    /// The bound degenerates (e.g. `f'(0) = 0`) and carries no information.
    #[error("degenerate: {0}")]
    Degenerate(String),

    /// The operation is not defined for this domain kind.
    #[error("unsupported domain: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
