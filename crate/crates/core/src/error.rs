use thiserror::Error;

/// Errors raised by series evaluation, entropy queries and bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    /// A parameter is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An order sits on the singular value of the formula (α = 1, β = 1 or α = β).
    #[error("degenerate order: {0}")]
    DegenerateOrder(String),

    /// The series did not reach the requested relative tolerance.
    #[error("series truncation failed after {terms} terms (relative tail estimate {tail:e})")]
    TruncationFailure { terms: usize, tail: f64 },

    /// γ outside the admissible window of the Rényi upper bound.
    #[error("gamma = {gamma} outside the admissible range [{min}, {max}]")]
    GammaOutOfRange { gamma: f64, min: f64, max: f64 },

    /// A scan grid with fewer than three points.
    #[error("scan grid needs at least 3 points, got {0}")]
    EmptyGrid(usize),

    /// The requested entropy has no closed-form large-λ asymptote.
    #[error("no closed-form asymptote for {0}")]
    NoAsymptote(&'static str),
}

pub type Result<T> = std::result::Result<T, EntropyError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(EntropyError::Domain(msg.into()))
}
