use thiserror::Error;

/// Errors surfaced by the optimizer, regressors, and statistics routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented range. `name` identifies the
    /// offending key using the same spelling the CLI and config files use.
    #[error("invalid value for `{name}`: {message}")]
    InvalidParam {
        name: &'static str,
        message: String,
    },

    /// The evaluation budget has been consumed; no further objective
    /// evaluations are permitted.
    #[error("evaluation budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    /// A vector's length does not match the expected dimension.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A regressor was asked to fit zero samples.
    #[error("cannot fit a regressor on an empty dataset")]
    EmptyDataset,

    /// A linear solve found a numerically inconsistent singular system
    /// (possible only at alpha = 0 on rank-deficient ridge features).
    #[error("singular system: no numerically consistent solution")]
    SingularSystem,

    /// An operation needs more input values than were supplied.
    #[error("{context} needs at least {needed} values, got {actual}")]
    TooFewValues {
        context: &'static str,
        needed: usize,
        actual: usize,
    },

    /// A non-finite number (NaN or infinity) reached a place that requires
    /// finite input.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// An individual's fitness was read before it was evaluated.
    #[error("individual fitness accessed before evaluation")]
    Unevaluated,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            message: message.into(),
        }
    }
}
