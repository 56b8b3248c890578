use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("series for |z|x^2 = {value:.3e} exceeds the guarded radius {radius}")]
    SeriesRadius { value: f64, radius: f64 },

    #[error("failed to bracket zero #{index}: {reason}")]
    Bracket { index: usize, reason: String },

    #[error("missed eigenvalue suspected near index {index}: {reason}")]
    MissedEigenvalue { index: usize, reason: String },

    #[error("step-size underflow at x = {x:e}")]
    StepUnderflow { x: f64 },

    #[error("non-convergence in {0}")]
    NonConvergence(String),

    #[error("support violation: {0}")]
    Support(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by bad input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Config(_)
                | Error::Support(_)
                | Error::Shape(_)
                | Error::Io(_)
        )
    }
}

impl Error {
    /// Short stable name of the variant, for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Config(_) => "config",
            Error::SeriesRadius { .. } => "series_radius",
            Error::Bracket { .. } => "bracket",
            Error::MissedEigenvalue { .. } => "missed_eigenvalue",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::NonConvergence(_) => "non_convergence",
            Error::Support(_) => "support",
            Error::Shape(_) => "shape",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code: 2 for validation errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            2
        } else {
            3
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
