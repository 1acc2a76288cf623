use thiserror::Error;

/// Errors produced by the numerical kernels, the model and the estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("moment does not exist: {0}")]
    DivergentMoment(String),

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("estimate outside the admissible region: {0}")]
    Infeasible(String),

    #[error("singular moment system: {0}")]
    Singular(String),

    #[error("root not bracketed: {0}")]
    Bracket(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o: {0}")]
    Io(String),

    #[error("draw {index} failed: {source}")]
    Draw { index: usize, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    /// True for failures caused by the input data rather than the numerics.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Io(_) | Error::InsufficientData { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
