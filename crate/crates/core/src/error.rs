use thiserror::Error;

/// Errors raised by the numerical routines and file readers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no convergence in {routine}: {detail}")]
    NonConvergence { routine: &'static str, detail: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("symbol has no tail model; a bounded or analytic tail must be declared")]
    MissingTailModel,

    #[error("atom values do not have mean zero (sum = {sum:e})")]
    NotMeanZero { sum: f64 },

    #[error("atom value {value:e} exceeds 1/#A = {bound:e}")]
    SupTooLarge { value: f64, bound: f64 },

    #[error("atom support is not a contiguous integer interval")]
    NonContiguousSupport,

    #[error("precondition violated: {0}")]
    PrecondViolated(String),

    #[error("spectrum of symbol cannot be determined: {0}")]
    UnknownSpectrum(String),

    #[error("window mismatch: expected {expected}, got {got}")]
    WindowMismatch { expected: usize, got: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn no_conv(routine: &'static str, detail: impl Into<String>) -> Self {
        Error::NonConvergence {
            routine,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of a numerical iteration, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Overflow(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
