use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or analysing a model.
///
/// Variants split into two families: input problems (bad matrices, domain
/// violations, structural preconditions) and numerical failures that signal
/// a bug or an ill-conditioned instance. See [`Error::is_numerical`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected order {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fertility matrix is zero")]
    ZeroFertility,

    #[error("mortality condition violated: rho(T) >= 1 (rho(T) = {rho})")]
    MortalityViolation { rho: f64 },

    #[error("power iteration did not converge after {iterations} iterations (bracket [{lo}, {hi}])")]
    Convergence { iterations: usize, lo: f64, hi: f64 },

    #[error("trajectory did not settle after {steps} steps (last change {change})")]
    NoLimit { steps: usize, change: f64 },

    #[error("singular matrix in elimination")]
    Singular,

    #[error("matrix is reducible: {0}")]
    Reducible(String),

    #[error("projection matrix is not primitive (imprimitivity index {d}); use periodic limits")]
    NotPrimitive { d: usize },

    #[error("net reproductive rate is zero (R0 = {r0}); fertility cannot be rescaled")]
    NotScalable { r0: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid population vector: {0}")]
    InvalidPopulation(String),

    #[error("population overflow at step {step}; use normalized iteration")]
    Overflow { step: usize },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::NoLimit { .. } | Error::Singular | Error::Overflow { .. } | Error::Consistency(_)
        )
    }
}
