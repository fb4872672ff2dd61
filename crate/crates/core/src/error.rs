use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("cross-validation failed: {0}")]
    CrossValidation(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("result underflows f64: {0}")]
    Underflow(String),

    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    #[error("insufficient scale range: {0}")]
    InsufficientScales(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for failures of a numerical certificate, as opposed to bad input.
    pub fn is_certification_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::CrossValidation(_) | Error::Certification(_)
        )
    }
}
