//! Population models `x_k = (T + F) x_{k-1}` and their reproduction numbers.
//!
//! A [`PopulationModel`] pairs a transition matrix `T` (survival and class
//! changes) with a fertility matrix `F` (newborns). Validation enforces
//! `F != 0` and the mortality condition `rho(T) < 1`; column sums of `T`
//! above one are legal and only produce a warning.
//!
//! From a model we derive the growth rate `r = rho(T + F)`, the next
//! generation matrix `Q = F (I - T)^{-1}`, and the net reproductive rate
//! `R0 = rho(Q)`. These always satisfy one of
//!
//! * `r = R0 = 1` (stationary),
//! * `1 < r <= R0` (growing),
//! * `0 <= R0 <= r < 1` (declining),
//!
//! with strict inequalities when `T + F` is irreducible and `T != 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::spectral::{perron_pair_with, resolvent_inverse_with, spectral_radius_with};
use crate::structure::{analyze_structure, next_gen_pattern, QPatternReport, StructureReport};
use crate::tolerance::{close, Tolerances};

pub use crate::spectral::wielandt_bracket;

/// Doublings tried when searching for `a` with `rho(T + aF) > rho(T)`.
pub const CERTIFICATE_DOUBLINGS: u32 = 33;

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationModel {
    transition: Matrix,
    fertility: Matrix,
    projection: Matrix,
    transition_radius: f64,
    warnings: Vec<String>,
    tol: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trichotomy {
    Stationary,
    Growing,
    Declining,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub growth_rate: f64,
    pub net_reproductive_rate: f64,
    pub trichotomy: Trichotomy,
    /// The inequalities between `r`, `R0` and 1 are strict. Claimed only for
    /// irreducible `T + F` with `T != 0`.
    pub strict: bool,
    pub structure: StructureReport,
    /// Block pattern of `Q`; present when `T + F` is irreducible.
    pub q_pattern: Option<QPatternReport>,
    /// `|rho(T + F/R0) - 1|`, when `R0 > 0`.
    pub stability_residual: Option<f64>,
}

/// A model whose fertility was divided by `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct FertilityScaling {
    pub q: f64,
    pub scaled: PopulationModel,
    /// `rho(T + F/q)` as recomputed after scaling.
    pub achieved_growth: f64,
    /// Net reproductive rate of the scaled model, `R0 / q`.
    pub net_reproductive_rate: f64,
    /// Right Perron vector (summing to 1) of the scaled projection matrix,
    /// when it is irreducible.
    pub stable_population: Option<Vec<f64>>,
}

impl PopulationModel {
    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    pub fn fertility(&self) -> &Matrix {
        &self.fertility
    }

    /// `P = T + F`.
    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn order(&self) -> usize {
        self.transition.order()
    }

    /// `rho(T)`, computed during validation.
    pub fn transition_radius(&self) -> f64 {
        self.transition_radius
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Same transition matrix, new fertility.
    pub fn with_fertility(&self, fertility: Matrix) -> Result<PopulationModel> {
        validate_model_with(self.transition.clone(), fertility, self.tol)
    }
}

pub fn validate_model(transition: Matrix, fertility: Matrix) -> Result<PopulationModel> {
    validate_model_with(transition, fertility, Tolerances::default())
}

pub fn validate_model_with(transition: Matrix, fertility: Matrix, tol: Tolerances) -> Result<PopulationModel> {
    if transition.order() != fertility.order() {
        return Err(Error::DimensionMismatch { expected: transition.order(), found: fertility.order() });
    }
    if fertility.is_zero() {
        return Err(Error::ZeroFertility);
    }
    let transition_radius = spectral_radius_with(&transition, &tol)?;
    if transition_radius >= 1.0 - tol.spectral {
        return Err(Error::MortalityViolation { rho: transition_radius });
    }
    let warnings = (0..transition.order())
        .filter_map(|j| {
            let s = transition.column_sum(j);
            (s > 1.0).then(|| format!("column {} of the transition matrix sums to {s} > 1", j + 1))
        })
        .collect();
    let projection = transition.add(&fertility)?;
    Ok(PopulationModel { transition, fertility, projection, transition_radius, warnings, tol })
}

/// `Q = F (I - T)^{-1}`.
pub fn next_generation_matrix(m: &PopulationModel) -> Result<Matrix> {
    let resolvent = resolvent_inverse_with(&m.transition, &m.tol)?;
    m.fertility.matmul(&resolvent)
}

pub fn analyze(m: &PopulationModel) -> Result<AnalysisReport> {
    let tol = &m.tol;
    let r = spectral_radius_with(&m.projection, tol)?;
    let q = next_generation_matrix(m)?;
    let r0 = spectral_radius_with(&q, tol)?;
    let structure = analyze_structure(&m.projection);
    let strict = structure.irreducible && !m.transition.is_zero();

    if structure.irreducible && r0 <= tol.classification {
        return Err(Error::Consistency(format!("irreducible projection matrix but R0 = {r0}")));
    }
    let trichotomy = classify(r, r0, tol.classification);
    check_weak_trichotomy(trichotomy, r, r0, tol.classification)?;

    let stability_residual = if r0 > tol.classification {
        let p1 = m.transition.add(&m.fertility.scaled(1.0 / r0))?;
        let residual = (spectral_radius_with(&p1, tol)? - 1.0).abs();
        if residual > tol.stability {
            return Err(Error::Consistency(format!("rho(T + F/R0) differs from 1 by {residual}")));
        }
        Some(residual)
    } else {
        None
    };

    let q_pattern = if structure.irreducible { Some(next_gen_pattern(&m.fertility, &q)?) } else { None };

    Ok(AnalysisReport {
        growth_rate: r,
        net_reproductive_rate: r0,
        trichotomy,
        strict,
        structure,
        q_pattern,
        stability_residual,
    })
}

/// Divides fertility by `R0`, producing a model with growth rate 1.
pub fn stabilizing_scale(m: &PopulationModel) -> Result<FertilityScaling> {
    let tol = &m.tol;
    let r0 = spectral_radius_with(&next_generation_matrix(m)?, tol)?;
    if r0 <= tol.classification {
        return Err(Error::NotScalable { r0 });
    }
    let scaled = m.with_fertility(m.fertility.scaled(1.0 / r0))?;
    let achieved = spectral_radius_with(&scaled.projection, tol)?;
    if !close(achieved, 1.0, tol.stability) {
        return Err(Error::Consistency(format!("rho(T + F/R0) = {achieved}, expected 1")));
    }
    let stable_population = stable_population(&scaled)?;
    Ok(FertilityScaling { q: r0, scaled, achieved_growth: achieved, net_reproductive_rate: 1.0, stable_population })
}

/// `q(s) = rho(F (I - T/s)^{-1}) / s`, defined for `s > rho(T)`.
pub fn growth_scale_factor(m: &PopulationModel, s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 0.0 && s > m.transition_radius + m.tol.spectral) {
        return Err(Error::Domain(format!(
            "target below rho(T): growth rate {s} must exceed rho(T) = {}",
            m.transition_radius
        )));
    }
    let resolvent = match resolvent_inverse_with(&m.transition.scaled(1.0 / s), &m.tol) {
        Err(Error::MortalityViolation { .. }) => {
            return Err(Error::Domain(format!("target below rho(T): {s} is too close to rho(T)")))
        }
        other => other?,
    };
    Ok(spectral_radius_with(&m.fertility.matmul(&resolvent)?, &m.tol)? / s)
}

/// Rescales fertility so that the growth rate becomes `s`.
pub fn target_growth_scale(m: &PopulationModel, s: f64) -> Result<FertilityScaling> {
    let tol = &m.tol;
    if !analyze_structure(&m.projection).irreducible {
        return Err(Error::Reducible("fertility scaling to a target growth rate needs an irreducible projection matrix".into()));
    }
    let q = growth_scale_factor(m, s)?;
    if q.is_nan() || q <= 0.0 {
        return Err(Error::Consistency(format!("q({s}) = {q} is not positive")));
    }
    let scaled = m.with_fertility(m.fertility.scaled(1.0 / q))?;
    let achieved = spectral_radius_with(&scaled.projection, tol)?;
    if !close(achieved, s, tol.stability) {
        return Err(Error::Consistency(format!("rho(T + F/q) = {achieved}, expected {s}")));
    }
    let r0 = spectral_radius_with(&next_generation_matrix(m)?, tol)?;
    let r0_scaled = r0 / q;
    check_weak_trichotomy(classify(s, r0_scaled, tol.classification), s, r0_scaled, tol.classification)?;
    let stable_population = stable_population(&scaled)?;
    Ok(FertilityScaling { q, scaled, achieved_growth: achieved, net_reproductive_rate: r0_scaled, stable_population })
}

/// Whether `R0 > 0`.
///
/// Irreducible models are settled by the block pattern of `Q`; otherwise a
/// certificate `rho(T + aF) > rho(T)` is searched over `a = 1, 2, 4, ...`.
/// Both answers are checked against `rho(Q)` directly.
pub fn r0_positive(m: &PopulationModel) -> Result<bool> {
    let tol = &m.tol;
    let q = next_generation_matrix(m)?;
    let direct = spectral_radius_with(&q, tol)? > tol.classification;

    let certified = if analyze_structure(&m.projection).irreducible {
        !next_gen_pattern(&m.fertility, &q)?.q11_indices.is_empty()
    } else {
        let base = m.transition_radius;
        let mut found = false;
        let mut a = 1.0;
        for _ in 0..CERTIFICATE_DOUBLINGS {
            let p = m.transition.add(&m.fertility.scaled(a))?;
            if spectral_radius_with(&p, tol)? > base + tol.spectral {
                found = true;
                break;
            }
            a *= 2.0;
        }
        found
    };
    if certified != direct {
        return Err(Error::Consistency(format!(
            "R0 > 0 certificate ({certified}) disagrees with rho(Q) > {} ({direct})",
            tol.classification
        )));
    }
    Ok(certified)
}

fn classify(r: f64, r0: f64, tol: f64) -> Trichotomy {
    if (r - 1.0).abs() <= tol && (r0 - 1.0).abs() <= tol {
        Trichotomy::Stationary
    } else if (r - 1.0).abs() > tol {
        if r > 1.0 {
            Trichotomy::Growing
        } else {
            Trichotomy::Declining
        }
    } else if r0 > 1.0 {
        Trichotomy::Growing
    } else {
        Trichotomy::Declining
    }
}

fn check_weak_trichotomy(class: Trichotomy, r: f64, r0: f64, tol: f64) -> Result<()> {
    let slack = tol * r.max(r0).max(1.0);
    let ok = match class {
        Trichotomy::Stationary => true,
        Trichotomy::Growing => r > 1.0 - tol && r <= r0 + slack,
        Trichotomy::Declining => r < 1.0 + tol && r0 <= r + slack && r0 >= 0.0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Consistency(format!("growth rate {r} and R0 {r0} violate the {class:?} ordering")))
    }
}

fn stable_population(m: &PopulationModel) -> Result<Option<Vec<f64>>> {
    match perron_pair_with(&m.projection, &m.tol) {
        Ok(pair) => Ok(Some(pair.right)),
        Err(Error::Reducible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
