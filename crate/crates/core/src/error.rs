use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a transcription token was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("expected 2 or 3 pitch digits, found {0}")]
    Length(usize),
    #[error("pitch digit '{0}' is outside 1..5")]
    Digit(char),
    #[error("unexpected character '{0}'")]
    NonDigit(char),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid transcription {token:?}: {reason}")]
    Transcription { token: String, reason: TokenError },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("invalid distance matrix: {0}")]
    Matrix(String),

    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed WAV data: {0}")]
    MalformedWav(String),

    #[error("unsupported WAV encoding: {0}")]
    UnsupportedWav(String),

    #[error("audio clip of {samples} samples is shorter than one {frame}-sample analysis frame")]
    ClipTooShort { samples: usize, frame: usize },

    #[error("need at least {required} contiguous voiced frames, found {found}")]
    InsufficientVoiced { found: usize, required: usize },

    #[error("eigen-iteration did not converge (residual {residual:.3e} after {iterations} iterations)")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("regions {a:?} and {b:?} share no survey words")]
    NoSharedWords { a: String, b: String },

    #[error("clip {index}: {source}")]
    Clip {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("model file: {0}")]
    Model(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
