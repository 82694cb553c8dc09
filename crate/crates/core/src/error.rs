use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input ball is not entirely positive")]
    NonPositiveInput,

    #[error("division by a ball that contains zero")]
    DivisionByZero,

    /// The ball is too wide to decide the requested predicate; refine and retry.
    #[error("ball too wide to certify the result: {0}")]
    AmbiguousPrecision(&'static str),

    #[error("precision exhausted at {digits} digits")]
    PrecisionExhausted { digits: u32 },

    #[error("continued fraction terminated before a denominator exceeded {threshold}")]
    TerminatedBelowThreshold { threshold: String },

    #[error("convergent denominator exceeded the cap of {cap}")]
    DenominatorCapExceeded { cap: String },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no convergence below {0}")]
    NoConvergence(String),

    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
