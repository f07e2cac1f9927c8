use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("event log is empty after filtering ({malformed} malformed lines, {self_loops} self-loops dropped)")]
    EmptyLog { malformed: usize, self_loops: usize },

    #[error("cannot split log spanning [{t_min}, {t_max}]: {half} half would be empty")]
    EmptyHalf { half: &'static str, t_min: i64, t_max: i64 },

    #[error("timestamp {t} lies outside the span [{t_min}, {t_max}]")]
    OutsideSpan { t: i64, t_min: i64, t_max: i64 },

    #[error("invalid window count {0}; must be at least 1")]
    InvalidWindowCount(usize),

    #[error("seed fraction {0} is outside (0, 1]")]
    InvalidFraction(f64),

    #[error("threshold {0} is outside (0, 1]")]
    InvalidThreshold(f64),

    #[error("cannot draw {requested} seeds from {available} eligible nodes")]
    NotEnoughNodes { requested: usize, available: usize },

    #[error("cannot rank an empty node set")]
    EmptyRanking,

    #[error("seed set is empty")]
    EmptySeedSet,

    #[error("result matrix needs at least 2 blocks and 2 treatments, got {blocks}x{treatments}")]
    DegenerateMatrix { blocks: usize, treatments: usize },

    #[error("result matrix is incomplete: {0}")]
    IncompleteMatrix(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
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
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_)
            | Error::InvalidWindowCount(_)
            | Error::InvalidFraction(_)
            | Error::InvalidThreshold(_) => ErrorKind::Config,
            Error::Context { source, .. } => source.kind(),
            _ => ErrorKind::Data,
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
