use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("mixed quadratic fields: sqrt({0}) and sqrt({1})")]
    MixedRadicals(u32, u32),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("division by the zero function")]
    DivisionByZero,

    #[error("singular interior resolvent at energy {eigenvalue}: {reason}")]
    Singular { reason: String, eigenvalue: f64 },

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("invalid momentum: {0}")]
    Momentum(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("sign calibration failed: {0}")]
    Calibration(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Momentum(_) => 1,
            Error::Parse(_)
            | Error::Validation(_)
            | Error::MixedRadicals(..)
            | Error::Json(_)
            | Error::Io(_)
            | Error::Unsupported(_)
            | Error::DivisionByZero
            | Error::Degenerate(_) => 2,
            Error::Singular { .. } | Error::Calibration(_) => 3,
            Error::ResourceLimit(_) => 4,
        }
    }
}
