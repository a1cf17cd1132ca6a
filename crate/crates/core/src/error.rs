use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Convergence,
    PostSelection,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("nothing to parallelize: k = {k} exceeds degree {degree}")]
    NothingToParallelize { k: usize, degree: usize },
    #[error("parity mismatch: {0}")]
    Parity(String),
    #[error("polynomial has odd degree {0}; a non-negative polynomial must have even degree")]
    OddDegree(usize),
    #[error("polynomial is negative on the real line (min {min:.3e} at x = {at:.6}); use the Chebyshev estimator")]
    NotNonNegative { min: f64, at: f64 },
    #[error("{threads} threads requested but only {half_degree} half-degree roots are available")]
    TooManyThreads { threads: usize, half_degree: usize },
    #[error("root finding failed: worst residual {worst_residual:.3e}")]
    RootFinding { worst_residual: f64 },
    #[error("factor {index} has sup-norm {norm:.6} > 1 on [-1, 1]; rescale the factors first")]
    NeedsRescale { index: usize, norm: f64 },
    #[error("factor {index} has zero sup-norm")]
    DegenerateFactor { index: usize },
    #[error("operator norm {0:.6} exceeds 1; rescale before block encoding")]
    NotContraction(f64),
    #[error("state is not a valid density matrix: {0}")]
    InvalidState(String),
    #[error("target sup-norm {0:.6} is too close to or above 1")]
    TargetNorm(f64),
    #[error("did not converge: best residual {best_residual:.3e} after {iterations} iterations")]
    Convergence { best_residual: f64, iterations: usize },
    #[error("post-selection impossible: success probability is zero")]
    PostSelectionImpossible,
    #[error("missing parameter: {0}")]
    MissingParameter(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Convergence { .. } | Error::RootFinding { .. } => ErrorKind::Convergence,
            Error::PostSelectionImpossible => ErrorKind::PostSelection,
            _ => ErrorKind::Input,
        }
    }
}
