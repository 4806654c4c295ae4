use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by the analytic and closed-form engines.
///
/// Error payloads are reported as `f64` regardless of the scalar the
/// computation ran in.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A truncated series hit its term cap before meeting its tolerance.
    /// Carries the partial sum accumulated so far.
    #[error("{context}: series did not converge within {max_terms} terms (partial sum {partial:e})")]
    NonConvergence {
        context: &'static str,
        partial: f64,
        max_terms: u64,
    },

    /// An argument violated a documented precondition.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error in {context}: {reason}")]
    Domain {
        context: &'static str,
        reason: String,
    },

    /// A truncation index search would exceed the hard index cap.
    #[error("truncation index exceeds hard cap {cap} at tolerance {eps:e}")]
    TruncationCapExceeded { cap: u64, eps: f64 },
}

impl Error {
    pub(crate) fn non_convergence(context: &'static str, partial: f64, max_terms: u64) -> Self {
        Error::NonConvergence {
            context,
            partial,
            max_terms,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(context: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            context,
            reason: reason.into(),
        }
    }
}
