//! Age-structured (Leslie) models.
//!
//! Survival rates sit on the first subdiagonal of `T` and fertilities in the
//! first row of `F`. Then `q(s)` is a polynomial in `1/s`,
//!
//! ```text
//! q(s) = f1/s + f2 t1/s^2 + ... + fn (t_{n-1} ... t1)/s^n,
//! ```
//!
//! `R0 = q(1)`, and the growth rate is the unique positive root of `q(r) = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{validate_model, PopulationModel};

/// Left end of the initial root bracket; `q` blows up there.
const BRACKET_SEED: f64 = 1e-8;
const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeslieModel {
    survival: Vec<f64>,
    fertility: Vec<f64>,
}

impl LeslieModel {
    /// `survival` has one entry fewer than `fertility`; survival rates lie in
    /// `(0, 1]`, fertilities are nonnegative and not all zero.
    pub fn new(survival: Vec<f64>, fertility: Vec<f64>) -> Result<Self> {
        let n = fertility.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("Leslie model needs at least one class".into()));
        }
        if survival.len() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, found: survival.len() });
        }
        if let Some(i) = survival.iter().position(|&t| !(t > 0.0 && t <= 1.0)) {
            return Err(Error::Domain(format!("survival rate t{} = {} is outside (0, 1]", i + 1, survival[i])));
        }
        if let Some(i) = fertility.iter().position(|&f| !(f >= 0.0 && f.is_finite())) {
            return Err(Error::Domain(format!("fertility f{} = {} is not a finite nonnegative number", i + 1, fertility[i])));
        }
        if fertility.iter().all(|&f| f == 0.0) {
            return Err(Error::ZeroFertility);
        }
        Ok(LeslieModel { survival, fertility })
    }

    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    pub fn fertility(&self) -> &[f64] {
        &self.fertility
    }

    pub fn classes(&self) -> usize {
        self.fertility.len()
    }

    /// Coefficients `c_k` of `q(s) = sum_k c_k s^{-k}`, `k = 1..=n`.
    fn coefficients(&self) -> Vec<f64> {
        let mut survive = 1.0;
        self.fertility
            .iter()
            .enumerate()
            .map(|(k, &f)| {
                if k > 0 {
                    survive *= self.survival[k - 1];
                }
                f * survive
            })
            .collect()
    }
}

pub fn assemble(l: &LeslieModel) -> Result<PopulationModel> {
    let n = l.classes();
    let mut t = vec![0.0; n * n];
    for (i, &s) in l.survival.iter().enumerate() {
        t[(i + 1) * n + i] = s;
    }
    let mut f = vec![0.0; n * n];
    f[..n].copy_from_slice(&l.fertility);
    validate_model(Matrix::from_row_major(n, t)?, Matrix::from_row_major(n, f)?)
}

/// `q(s)` by Horner's rule in `1/s`.
pub fn q_poly_eval(l: &LeslieModel, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("q(s) needs s > 0, got {s}")));
    }
    Ok(horner(&l.coefficients(), 1.0 / s))
}

/// Net reproductive rate `q(1) = f1 + f2 t1 + ... + fn t_{n-1} ... t1`.
pub fn leslie_r0(l: &LeslieModel) -> f64 {
    l.coefficients().iter().sum()
}

/// Growth rate: the positive root of `q(r) = 1`, by bisection on the
/// decreasing function `q` followed by Newton polishing.
pub fn leslie_growth_rate(l: &LeslieModel) -> Result<f64> {
    let c = l.coefficients();
    let q = |s: f64| horner(&c, 1.0 / s);

    let mut lo = BRACKET_SEED;
    if q(lo) <= 1.0 {
        return Err(Error::Domain("growth rate below the bisection seed".into()));
    }
    let mut hi = 1.0;
    while q(hi) > 1.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Domain("growth rate overflows".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if q(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = 0.5 * (lo + hi);

    // q'(s) = -sum_k k c_k s^{-k-1}
    for _ in 0..4 {
        let z = 1.0 / r;
        let value = horner(&c, z) - 1.0;
        let slope: f64 = -c.iter().enumerate().map(|(k, &ck)| (k + 1) as f64 * ck * z.powi(k as i32 + 2)).sum::<f64>();
        if slope == 0.0 {
            break;
        }
        let next = r - value / slope;
        if next.is_nan() || next <= 0.0 || (horner(&c, 1.0 / next) - 1.0).abs() > value.abs() {
            break;
        }
        r = next;
    }
    let residual = (q(r) - 1.0).abs();
    if residual > ROOT_TOL {
        return Err(Error::Consistency(format!("|q(r) - 1| = {residual} after root polishing")));
    }
    Ok(r)
}

/// `sum_k c_k z^k` for `k = 1..=n`.
fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| (acc + ck) * z)
}
