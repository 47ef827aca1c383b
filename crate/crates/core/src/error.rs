use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration field is missing, out of range or inconsistent.
    #[error("invalid config `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    /// Stochastic generation gave up (e.g. seeds too dense for the separation rule).
    #[error("generation failed: {0}")]
    Generation(String),

    /// No admissible concavity perturbation was found.
    #[error("perturbation failed: {0}")]
    Perturbation(String),

    /// Argument outside the mathematical domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("model has no elements")]
    EmptyModel,

    #[error("element {0} has zero length")]
    SingularElement(usize),

    /// Model constraints are inconsistent (double constraints, bad indices).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Reduced stiffness is singular: some part of the structure can move freely.
    #[error("mechanism: {0}")]
    Mechanism(String),

    /// Ritz system could not be factorized.
    #[error("ill-conditioned Ritz system: {0}")]
    Conditioning(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Some dataset samples failed even after retrying with fallback seeds.
    #[error("dataset samples failed after retries: {failed:?}")]
    PartialDataset { failed: Vec<usize> },

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
