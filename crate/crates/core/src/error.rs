use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("a signal needs at least one entry")]
    EmptySignal,

    #[error("matrix dimensions must be at least 1x1, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("gave up after {attempts} degenerate random draws while {context}")]
    DegenerateDraws {
        attempts: usize,
        context: &'static str,
    },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("no admissible (theta, phi) combination among {x_elements} x {y_elements} decompositions: {detail}")]
    NoAdmissibleAngles {
        x_elements: usize,
        y_elements: usize,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
