use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// The data are valid but an estimator cannot produce a result.
    #[error("estimation error: {0}")]
    Estimation(String),
    /// A realization of a Monte Carlo run failed.
    #[error("realization {index} (master seed {seed}) failed: {source}")]
    Realization {
        index: u64,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn estimation(msg: impl Into<String>) -> Self {
        Error::Estimation(msg.into())
    }

    /// True for errors raised by estimators (including wrapped realization failures).
    pub fn is_estimation(&self) -> bool {
        match self {
            Error::Estimation(_) => true,
            Error::Realization { source, .. } => source.is_estimation(),
            Error::Domain(_) => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
