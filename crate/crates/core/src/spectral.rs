//! Perron–Frobenius machinery: spectral radius, Perron vectors, and the
//! resolvent `(I - T)^{-1}`.
//!
//! The spectral radius of a nonnegative matrix is the largest Perron root
//! among the irreducible diagonal blocks of its Frobenius normal form. Each
//! block is handled by power iteration on `A + cI` with `c > 0`: the shifted
//! matrix is primitive whenever `A` is irreducible and shares its Perron
//! vector, so the iteration converges even for periodic blocks. Convergence
//! is certified by the Collatz–Wielandt bracket
//! `min (Ax)_i / x_i <= rho(A) <= max (Ax)_i / x_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::structure::{analyze_structure, positivity_digraph, reachability, strong_components};
use crate::tolerance::Tolerances;

/// Perron root with left and right Perron vectors.
///
/// `right` sums to 1 and `left · right = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPair {
    pub rho: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    spectral_radius_with(m, &Tolerances::default())
}

pub fn spectral_radius_with(m: &Matrix, tol: &Tolerances) -> Result<f64> {
    let adj = positivity_digraph(m, 0.0);
    let mut rho = 0.0f64;
    for comp in strong_components(&adj) {
        let block_rho = if comp.len() == 1 {
            m.get(comp[0], comp[0])
        } else {
            block_perron(&m.principal_submatrix(&comp), tol)?.0
        };
        rho = rho.max(block_rho);
    }
    Ok(rho)
}

pub fn perron_pair(m: &Matrix) -> Result<SpectralPair> {
    perron_pair_with(m, &Tolerances::default())
}

pub fn perron_pair_with(m: &Matrix, tol: &Tolerances) -> Result<SpectralPair> {
    if !analyze_structure(m).irreducible {
        return Err(Error::Reducible(
            "Perron vectors are only unique for irreducible matrices; analyse each strongly connected component".into(),
        ));
    }
    let (rho, mut right) = block_perron(m, tol)?;
    let (_, mut left) = block_perron(&m.transpose(), tol)?;

    let s: f64 = right.iter().sum();
    right.iter_mut().for_each(|v| *v /= s);
    let d = dot(&left, &right);
    left.iter_mut().for_each(|v| *v /= d);
    Ok(SpectralPair { rho, right, left })
}

/// Collatz–Wielandt bounds `(min_i (Ax)_i / x_i, max_i (Ax)_i / x_i)` for a
/// strictly positive `x`.
pub fn wielandt_bracket(a: &Matrix, x: &[f64]) -> Result<(f64, f64)> {
    if x.len() != a.order() {
        return Err(Error::DimensionMismatch { expected: a.order(), found: x.len() });
    }
    if let Some(i) = x.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("bracket vector must be strictly positive (entry {} is {})", i + 1, x[i])));
    }
    Ok(ratio_bounds(&a.mul_vec(x), x))
}

/// `(I - T)^{-1}` by Gaussian elimination with partial pivoting.
///
/// Entries that are structurally zero (no walk in the pattern of `T` leads
/// from column to row) are set to exactly zero; tiny negative round-off is
/// clamped.
pub fn resolvent_inverse(t: &Matrix) -> Result<Matrix> {
    resolvent_inverse_with(t, &Tolerances::default())
}

pub fn resolvent_inverse_with(t: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let rho = spectral_radius_with(t, tol)?;
    if rho >= 1.0 - tol.spectral {
        return Err(Error::MortalityViolation { rho });
    }
    let n = t.order();
    let mut a: Vec<f64> = t.as_slice().iter().map(|v| -v).collect();
    for i in 0..n {
        a[i * n + i] += 1.0;
    }
    let mut inv = invert_dense(n, a)?;

    let reach = reachability(&positivity_digraph(t, 0.0));
    let scale = inv.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..n {
        for j in 0..n {
            let v = &mut inv[i * n + j];
            if !reach[j][i] {
                *v = 0.0;
            } else if *v < 0.0 {
                if *v < -tol.negative * scale {
                    return Err(Error::Consistency(format!(
                        "resolvent entry ({}, {}) is negative ({})",
                        i + 1,
                        j + 1,
                        *v
                    )));
                }
                *v = 0.0;
            }
        }
    }
    Ok(Matrix::from_trusted(n, inv))
}

/// Perron root and a positive Perron vector (summing to 1) of an irreducible
/// matrix.
pub(crate) fn block_perron(a: &Matrix, tol: &Tolerances) -> Result<(f64, Vec<f64>)> {
    let n = a.order();
    if n == 1 {
        return Ok((a.get(0, 0), vec![1.0]));
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut shift = a.norm_inf();
    let (mut best_lo, mut best_hi) = (0.0f64, f64::INFINITY);
    for _ in 0..tol.max_iterations {
        let y = a.mul_vec(&x);
        let (lo, hi) = ratio_bounds(&y, &x);
        best_lo = best_lo.max(lo);
        best_hi = best_hi.min(hi);
        if hi - lo <= tol.spectral * hi {
            return Ok((0.5 * (lo + hi), x));
        }
        // any positive shift keeps the Perron vector; hi >= rho is a good one
        shift = if hi.is_finite() && hi > 0.0 { hi } else { shift };
        let mut sum = 0.0;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi + shift * *xi;
            sum += *xi;
        }
        x.iter_mut().for_each(|v| *v /= sum);
    }
    Err(Error::Convergence { iterations: tol.max_iterations, lo: best_lo, hi: best_hi })
}

fn ratio_bounds(ax: &[f64], x: &[f64]) -> (f64, f64) {
    ax.iter()
        .zip(x)
        .map(|(a, b)| a / b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

/// Inverse of a general dense matrix (row-major).
fn invert_dense(n: usize, mut a: Vec<f64>) -> Result<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p * n + col].abs().total_cmp(&a[q * n + col].abs()))
            .expect("non-empty pivot range");
        if a[pivot * n + col].abs() <= f64::EPSILON * scale {
            return Err(Error::Singular);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row * n + col];
            if factor == 0.0 {
                continue;
            }
            for k in 0..n {
                a[row * n + k] -= factor * a[col * n + k];
                inv[row * n + k] -= factor * inv[col * n + k];
            }
        }
    }
    Ok(inv)
}
