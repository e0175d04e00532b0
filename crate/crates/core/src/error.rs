use crate::Natural;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// `u^2 - d v^2 = 1` has no non-trivial solutions for this `d`.
    #[error("Pell equation degenerate: d = {0} must be a non-square integer >= 2")]
    PellDegenerate(Natural),
    #[error("domain error: {0}")]
    Domain(String),
    /// A postcondition that exact arithmetic guarantees did not hold.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
