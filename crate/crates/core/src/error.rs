use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("antenna index {index} out of range for a layout of {len} antennas")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("placement error: {0}")]
    Placement(String),

    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),

    #[error("full-grid search would visit {combinations} layouts (cap is {cap}); shrink the window or use the two-stage strategy")]
    GridTooLarge { combinations: f64, cap: f64 },

    #[error("scenario sampling failed after {0} attempts")]
    Sampling(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error at {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing CSV to {path}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("writing JSON to {path}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        name,
        reason: reason.into(),
    }
}
