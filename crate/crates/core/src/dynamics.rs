//! Trajectories `x_k = P x_{k-1}` and their long-run behaviour.
//!
//! For primitive `P` with growth rate `r` and Perron vectors normalised so
//! that `vᵗu = 1`, `x_k / r^k -> (vᵗx_0) u`. For irreducible `P` with
//! imprimitivity index `d > 1` only the `d` residue subsequences
//! `x_{kd+i} / r^{kd+i}` converge. Reducible models are refused.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, norm_inf};
use crate::model::PopulationModel;
use crate::spectral::{perron_pair_with, spectral_radius_with};
use crate::structure::analyze_structure;
use crate::tolerance::Tolerances;

/// Required agreement between the iterated limit and `(vᵗx_0) u`.
pub const LIMIT_AGREEMENT: f64 = 1e-6;
/// Consecutive settled steps needed to accept a limit.
const SETTLE_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub step: usize,
    pub population: Vec<f64>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    /// Entries are `x_k / r^k`.
    pub normalized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fate {
    Extinct,
    Finite,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventualLimit {
    /// `lim x_k / r^k = (vᵗx_0) u`.
    pub limit: Vec<f64>,
    pub fate: Fate,
    pub growth_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicLimits {
    pub d: usize,
    /// `limits[i] = lim_k x_{kd+i} / r^{kd+i}`.
    pub limits: Vec<Vec<f64>>,
    pub growth_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PopulationKind {
    Stable(f64),
    Stationary,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationClass {
    pub kind: PopulationKind,
    /// `‖Px - λx‖∞ / ‖x‖∞` for the estimated `λ`.
    pub residual: f64,
}

impl PopulationClass {
    /// Stationary populations are stable with `λ = 1`.
    pub fn is_stable(&self) -> bool {
        !matches!(self.kind, PopulationKind::Neither)
    }
}

pub fn iterate(m: &PopulationModel, x0: &[f64], steps: usize, normalize: bool) -> Result<Trajectory> {
    check_population(m, x0)?;
    let p = m.projection();
    let divisor = if normalize {
        let r = spectral_radius_with(p, m.tolerances())?;
        if r <= m.tolerances().spectral {
            return Err(Error::Domain(format!("cannot normalize by growth rate r = {r}")));
        }
        r
    } else {
        1.0
    };

    let record = |step: usize, population: Vec<f64>| TrajectoryStep { step, total: population.iter().sum(), population };
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    out.push(record(0, x.clone()));
    for k in 1..=steps {
        x = p.mul_vec(&x);
        if normalize {
            x.iter_mut().for_each(|v| *v /= divisor);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow { step: k });
        }
        out.push(record(k, x.clone()));
    }
    Ok(Trajectory { steps: out, normalized: normalize })
}

pub fn eventual_limit(m: &PopulationModel, x0: &[f64]) -> Result<EventualLimit> {
    check_population(m, x0)?;
    let tol = m.tolerances();
    let p = m.projection();
    let structure = analyze_structure(p);
    if !structure.irreducible {
        return Err(Error::Reducible("long-run limits of reducible models are not analysed".into()));
    }
    if !structure.primitive {
        return Err(Error::NotPrimitive { d: structure.imprimitivity_index.unwrap_or(0) });
    }
    let pair = perron_pair_with(p, tol)?;
    let r = pair.rho;
    let weight = dot(&pair.left, x0);
    let direct: Vec<f64> = pair.right.iter().map(|u| weight * u).collect();

    let iterated = settle(x0.to_vec(), |y| p.mul_vec(y).into_iter().map(|v| v / r).collect(), tol)?;
    let gap = direct.iter().zip(&iterated).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > LIMIT_AGREEMENT * norm_inf(&direct).max(1.0) {
        return Err(Error::Consistency(format!(
            "iterated limit differs from (v'x0)u by {gap}"
        )));
    }
    Ok(EventualLimit { limit: direct, fate: fate(r, tol), growth_rate: r })
}

pub fn periodic_limits(m: &PopulationModel, x0: &[f64]) -> Result<PeriodicLimits> {
    check_population(m, x0)?;
    let tol = m.tolerances();
    let p = m.projection();
    let structure = analyze_structure(p);
    let d = match structure.imprimitivity_index {
        Some(d) if structure.irreducible => d,
        _ => return Err(Error::Reducible("periodic limits need an irreducible projection matrix".into())),
    };
    if d == 1 {
        let lim = eventual_limit(m, x0)?;
        return Ok(PeriodicLimits { d, limits: vec![lim.limit], growth_rate: lim.growth_rate });
    }

    let r = spectral_radius_with(p, tol)?;
    let step = |y: &[f64]| -> Vec<f64> { p.mul_vec(y).into_iter().map(|v| v / r).collect() };
    let mut start = x0.to_vec();
    let mut limits = Vec::with_capacity(d);
    for _ in 0..d {
        let next_start = step(&start);
        let limit = settle(start, |y| (0..d).fold(y.to_vec(), |acc, _| step(&acc)), tol)?;
        limits.push(limit);
        start = next_start;
    }
    if limits.iter().all(|w| w.iter().all(|&v| v == 0.0)) {
        return Err(Error::Consistency("all periodic limits vanish".into()));
    }
    Ok(PeriodicLimits { d, limits, growth_rate: r })
}

pub fn classify_population(m: &PopulationModel, x: &[f64]) -> Result<PopulationClass> {
    check_population(m, x)?;
    let tol = m.tolerances();
    let p = m.projection();
    let px = p.mul_vec(x);

    let lambda = if analyze_structure(p).irreducible {
        let pair = perron_pair_with(p, tol)?;
        dot(&pair.left, &px) / dot(&pair.left, x)
    } else {
        let mut ratios: Vec<f64> = x.iter().zip(&px).filter(|(xi, _)| **xi > 0.0).map(|(xi, yi)| yi / xi).collect();
        ratios.sort_by(f64::total_cmp);
        let k = ratios.len();
        if k % 2 == 1 {
            ratios[k / 2]
        } else {
            0.5 * (ratios[k / 2 - 1] + ratios[k / 2])
        }
    };
    let residual = px
        .iter()
        .zip(x)
        .map(|(y, xi)| (y - lambda * xi).abs())
        .fold(0.0, f64::max)
        / norm_inf(x);

    let kind = if lambda > 0.0 && residual <= tol.dynamics * lambda.max(1.0) {
        if (lambda - 1.0).abs() <= tol.classification {
            PopulationKind::Stationary
        } else {
            PopulationKind::Stable(lambda)
        }
    } else {
        PopulationKind::Neither
    };
    Ok(PopulationClass { kind, residual })
}

/// Fate of an irreducible model with growth rate `r`: nonzero populations
/// die out, approach a finite limit, or grow without bound.
pub fn fate(r: f64, tol: &Tolerances) -> Fate {
    if r < 1.0 - tol.classification {
        Fate::Extinct
    } else if r > 1.0 + tol.classification {
        Fate::Unbounded
    } else {
        Fate::Finite
    }
}

fn check_population(m: &PopulationModel, x: &[f64]) -> Result<()> {
    if x.len() != m.order() {
        return Err(Error::DimensionMismatch { expected: m.order(), found: x.len() });
    }
    if let Some(i) = x.iter().position(|&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::InvalidPopulation(format!("entry {} is {}", i + 1, x[i])));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidPopulation("population is zero".into()));
    }
    Ok(())
}

/// Iterates `map` from `y` until successive iterates agree.
///
/// A step counts as settled when the change is below `tol.dynamics`
/// (relative to the iterate) and, from the observed contraction ratio, so is
/// the remaining distance to the limit; or when the change is below the
/// relative precision of the growth rate used for normalisation.
fn settle(mut y: Vec<f64>, map: impl Fn(&[f64]) -> Vec<f64>, tol: &Tolerances) -> Result<Vec<f64>> {
    let mut prev_change = f64::INFINITY;
    let mut change = f64::INFINITY;
    let mut streak = 0;
    for _ in 0..tol.max_steps {
        let next = map(&y);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoLimit { steps: tol.max_steps, change: f64::INFINITY });
        }
        let scale = norm_inf(&next).max(f64::MIN_POSITIVE);
        change = next.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let ratio = change / prev_change;
        let remaining = if ratio < 1.0 { change * ratio / (1.0 - ratio) } else { f64::INFINITY };
        // below the precision of r the change is drift in |x|, not convergence
        let floor = tol.spectral.max(64.0 * f64::EPSILON) * scale;
        let settled = change <= floor
            || (change <= tol.dynamics * scale && remaining <= tol.dynamics * scale);
        streak = if settled { streak + 1 } else { 0 };
        prev_change = change;
        y = next;
        if streak >= SETTLE_WINDOW {
            return Ok(y);
        }
    }
    Err(Error::NoLimit { steps: tol.max_steps, change })
}
