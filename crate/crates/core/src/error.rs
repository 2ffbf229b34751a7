use thiserror::Error;

/// Errors surfaced by the analysis pipeline.
///
/// `Hypothesis` is kept separate from `InvalidInput` because the two map to
/// different process exit codes in the CLI: a hypothesis violation means the
/// input was well-formed but the square-root machinery cannot exist for it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("q[{i}][{j}] and q[{j}][{i}] are not mutually inverse: the matrix is not multiplicatively antisymmetric")]
    Antisymmetry { i: usize, j: usize },

    #[error("q[{i}][{i}] must be the identity")]
    DiagonalNotIdentity { i: usize },

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zero pattern of the point does not match the stratum: expected zeros exactly at {expected:?} (1-based), found them at {found:?}")]
    ZeroPattern {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that should map to the "hypothesis violation" exit code.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(self, Error::Hypothesis(_))
    }
}
