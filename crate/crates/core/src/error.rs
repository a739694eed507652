use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected a state in the {expected} basis, got {found}")]
    WrongBasis {
        expected: &'static str,
        found: &'static str,
    },

    #[error("{quantity} must be {requirement}, got {value}")]
    OutOfRange {
        quantity: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("sample has no refractive index difference (n_L - n_R)")]
    MissingIndexDifference,

    #[error("angular momentum and tube radius must be nonzero")]
    Singularity,

    #[error("cascade needs at least one molecule")]
    EmptyCascade,

    #[error("loop is open: first and last samples differ")]
    OpenLoop,

    #[error("loop needs at least 3 samples, got {0}")]
    TooFewLoopSamples(usize),

    #[error("states are orthogonal, the relative phase is undefined")]
    OrthogonalStates,

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("fit needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("predictor l*c has zero variance")]
    DegeneratePredictor,

    #[error("fit records mix samples `{0}` and `{1}`")]
    MixedSamples(String, String),

    #[error("sample `{sample}` has concentration {concentration}% more than once")]
    DuplicateConcentration { sample: String, concentration: f64 },

    #[error("nothing to plot")]
    EmptySeries,
}

impl Error {
    pub(crate) fn out_of_range(
        quantity: &'static str,
        requirement: &'static str,
        value: f64,
    ) -> Self {
        Error::OutOfRange {
            quantity,
            requirement,
            value,
        }
    }

    pub(crate) fn row(line: u64, message: impl fmt::Display) -> Self {
        Error::Row {
            line,
            message: message.to_string(),
        }
    }
}
