use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative width of the Collatz–Wielandt bracket at which power
    /// iteration stops. Also the margin for `rho(T) < 1`.
    pub spectral: f64,
    /// Power-iteration budget per irreducible block.
    pub max_iterations: usize,
    /// Largest negative entry tolerated (and clamped) in `(I - T)^{-1}`.
    pub negative: f64,
    /// Slack used when classifying `r` and `R0` against 1.
    pub classification: f64,
    /// Allowed residual of the growth rate after rescaling fertility.
    pub stability: f64,
    /// Step-to-step tolerance for trajectory limits.
    pub dynamics: f64,
    /// Step budget for trajectory limits.
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            spectral: 1e-12,
            max_iterations: 200_000,
            negative: 1e-10,
            classification: 1e-9,
            stability: 1e-8,
            dynamics: 1e-9,
            max_steps: 1_000_000,
        }
    }
}

/// `|a - b| <= tol * max(1, |b|)`.
pub(crate) fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
