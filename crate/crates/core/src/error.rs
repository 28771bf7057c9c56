use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value that must be finite was not.
    #[error("input error: {0}")]
    Input(String),

    /// A probability or parameter outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Data violates a structural invariant (monotone CDFs, outcomes, ...).
    #[error("validation error: {0}")]
    Validation(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The score kind cannot be applied to this sample space.
    #[error("score kind error: {0}")]
    ScoreKind(String),

    #[error("unsupported observation: {0}")]
    UnsupportedObservation(String),

    /// Every class of a log-linear density pool received zero mass.
    #[error("degenerate pool: {0}")]
    DegeneratePool(String),

    #[error("optimization failed: {0}")]
    Optimization(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("unstable metric: {undefined} of {total} bootstrap resamples were undefined")]
    UnstableMetric { undefined: usize, total: usize },

    #[error("training error: {0}")]
    Training(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("member {index}: {source}")]
    Member {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by malformed or invalid input, as opposed to
    /// failures of a numerical procedure on valid input.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Input(_)
            | Error::Domain(_)
            | Error::Validation(_)
            | Error::Shape(_)
            | Error::ScoreKind(_)
            | Error::UnsupportedObservation(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => true,
            Error::Member { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
