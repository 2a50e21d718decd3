use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("base semiring mismatch: {0}")]
    BaseMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no tensor rule for {0} ⊗ {1}")]
    NoRule(String, String),
    #[error("undecided: budget of {budget} exceeded while {during}")]
    Undecided { budget: usize, during: String },
    #[error("not linear: {0}")]
    NotLinear(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_undecided(&self) -> bool {
        matches!(self, Error::Undecided { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Work limit for saturations and enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub usize);

impl Budget {
    pub const DEFAULT: Budget = Budget(1_000_000);

    pub fn exceeded(&self, during: impl Into<String>) -> Error {
        Error::Undecided { budget: self.0, during: during.into() }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}
