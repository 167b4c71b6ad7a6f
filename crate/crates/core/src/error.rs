use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Market constants violate `a > 0, b > 0, 0 <= c < b, m >= 0, 0 < f <= (b-c)/a`.
    #[error("invalid market parameters: {0}")]
    InvalidParams(String),

    /// An argument is outside the domain of the requested operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A ratio was requested whose welfare denominator is zero.
    #[error("welfare of the compared profile is zero; ratio undefined")]
    ZeroWelfare,

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("cannot write `{}`: {source}", path.display())]
    Output {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
