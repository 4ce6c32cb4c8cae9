//! Dense square nonnegative matrices.
//!
//! Every [`Matrix`] holds finite entries `>= 0`; the constructors reject
//! anything else, and the arithmetic exposed here (sums, nonnegative scaling,
//! products, principal submatrices) cannot leave that set. Storage is
//! row-major.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix order must be positive");
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data of length `n * n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("order must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for order {n}, found {}",
                n * n,
                data.len()
            )));
        }
        for (k, &v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({}, {}) is not finite",
                    k / n + 1,
                    k % n + 1
                )));
            }
            if v < 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({}, {}) is negative ({v})",
                    k / n + 1,
                    k % n + 1
                )));
            }
        }
        Ok(Matrix { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n} (matrix must be square)",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    /// A diagonal matrix with the given nonnegative entries.
    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        let mut data = vec![0.0; n * n];
        for (i, &v) in entries.iter().enumerate() {
            data[i * n + i] = v;
        }
        Self::from_row_major(n, data)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|&v| v == 0.0)
    }

    pub fn column_sum(&self, j: usize) -> f64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Largest row sum; an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.n)
            .map(|r| r.iter().sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Matrix { n, data }
    }

    /// Multiplies every entry by a finite `factor >= 0`.
    pub fn scaled(&self, factor: f64) -> Matrix {
        assert!(factor.is_finite() && factor >= 0.0, "scale factor must be finite and nonnegative");
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_order(other)?;
        Ok(Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// `self + factor * I`.
    pub fn shifted(&self, factor: f64) -> Matrix {
        assert!(factor.is_finite() && factor >= 0.0, "shift must be finite and nonnegative");
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += factor;
        }
        m
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_order(other)?;
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (out, &b) in data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        Ok(Matrix { n, data })
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "vector length must match matrix order");
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `yᵗ M`, returned as a column.
    pub fn vec_mul(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.n, "vector length must match matrix order");
        let mut out = vec![0.0; self.n];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += yi * a;
            }
        }
        out
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Matrix {
        let k = indices.len();
        assert!(k >= 1, "submatrix needs at least one index");
        let mut data = Vec::with_capacity(k * k);
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j));
            }
        }
        Matrix { n: k, data }
    }

    /// Zero pattern: 1 where the entry exceeds `threshold`, else 0.
    pub fn pattern(&self, threshold: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&v| if v > threshold { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn check_same_order(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// Crate-internal constructor for data already known to be valid.
    pub(crate) fn from_trusted(n: usize, data: Vec<f64>) -> Matrix {
        debug_assert!(data.len() == n * n && data.iter().all(|v| v.is_finite() && *v >= 0.0));
        Matrix { n, data }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n)).finish()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}
