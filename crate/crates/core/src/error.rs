use thiserror::Error;

/// Errors raised by the library.
///
/// Failing to find a feasible start cover is reported as [`Error::Infeasible`]
/// only at the run level; [`crate::covers::initial_cover`] itself returns `None`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "oracle budget exceeded: {what} requires {required} candidates but the budget is {budget}; shrink n, k or mu"
    )]
    OracleBudget {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("no cover of size at most {k} was found; the instance may be infeasible for this k")]
    Infeasible { k: usize },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// The innermost error, looking through [`Error::Trial`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Trial { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
