//! JSON payloads written by the commands.
//!
//! Every float is rounded to 9 significant digits (ties to even) when a
//! payload is built, so serializing and parsing a payload is lossless and
//! golden files are stable. Class indices are 1-based.

use popdyn_core::{AnalysisReport, FertilityScaling, PopulationModel, Tolerances, Trichotomy};
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rounds to 9 significant digits. `{:e}` formatting rounds the exact
/// binary value half-to-even, and parsing returns the nearest double.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

fn sig9_all(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(sig9).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TolerancePayload {
    pub spectral: f64,
    pub classification: f64,
    pub stability: f64,
}

impl From<&Tolerances> for TolerancePayload {
    fn from(t: &Tolerances) -> Self {
        TolerancePayload { spectral: sig9(t.spectral), classification: sig9(t.classification), stability: sig9(t.stability) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QPatternPayload {
    /// Classes whose rows of `Q` are nonzero, then the zero rows.
    pub permutation: Vec<usize>,
    pub nonzero_rows: Vec<usize>,
    pub zero_rows: Vec<usize>,
    pub q_irreducible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPayload {
    pub version: String,
    pub r: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
    pub trichotomy: Trichotomy,
    pub strict: bool,
    pub irreducible: bool,
    pub primitive: bool,
    pub imprimitivity_index: Option<usize>,
    pub components: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q_pattern: Option<QPatternPayload>,
    pub warnings: Vec<String>,
    pub tolerances: TolerancePayload,
}

impl ReportPayload {
    pub fn new(model: &PopulationModel, report: &AnalysisReport) -> Self {
        let s = &report.structure;
        ReportPayload {
            version: VERSION.to_string(),
            r: sig9(report.growth_rate),
            r0: sig9(report.net_reproductive_rate),
            trichotomy: report.trichotomy,
            strict: report.strict,
            irreducible: s.irreducible,
            primitive: s.primitive,
            imprimitivity_index: s.imprimitivity_index,
            components: s.components.iter().map(|c| one_based(c)).collect(),
            q_pattern: report.q_pattern.as_ref().map(|q| QPatternPayload {
                permutation: one_based(&q.permutation),
                nonzero_rows: one_based(&q.q11_indices),
                zero_rows: one_based(&q.zero_rows),
                q_irreducible: q.q_irreducible,
            }),
            warnings: model.warnings().to_vec(),
            tolerances: model.tolerances().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalePayload {
    pub version: String,
    pub q: f64,
    pub scaled_fertility: Vec<Vec<f64>>,
    pub achieved_growth: f64,
    #[serde(rename = "R0_s")]
    pub r0_s: f64,
    /// Unit-sum stable population of the rescaled model, when irreducible.
    pub stable_population: Option<Vec<f64>>,
}

impl ScalePayload {
    pub fn new(s: &FertilityScaling) -> Self {
        ScalePayload {
            version: VERSION.to_string(),
            q: sig9(s.q),
            scaled_fertility: s.scaled.fertility().to_rows().iter().map(|r| sig9_all(r)).collect(),
            achieved_growth: sig9(s.achieved_growth),
            r0_s: sig9(s.net_reproductive_rate),
            stable_population: s.stable_population.as_deref().map(sig9_all),
        }
    }
}

/// Long-run behaviour printed after a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub steps: usize,
    pub normalized: bool,
    pub growth_rate: f64,
    pub imprimitivity_index: Option<usize>,
    pub fate: Option<popdyn_core::Fate>,
    /// `lim x_k / r^k` for primitive models.
    pub limit: Option<Vec<f64>>,
    /// `lim x_{kd+i} / r^{kd+i}` for `i = 0..d` when the period `d > 1`.
    pub periodic_limits: Option<Vec<Vec<f64>>>,
    pub note: Option<String>,
}

impl SimulationSummary {
    pub fn rounded(mut self) -> Self {
        self.growth_rate = sig9(self.growth_rate);
        self.limit = self.limit.as_deref().map(sig9_all);
        self.periodic_limits = self.periodic_limits.map(|ls| ls.iter().map(|l| sig9_all(l)).collect());
        self
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("payloads serialize");
    s.push('\n');
    s
}
