//! Test-only oracles and random model generators.
//!
//! The oracles here deliberately avoid the library's own algorithms: the
//! spectral radius comes from characteristic-polynomial roots, the period
//! from exhaustive cycle enumeration, primitivity from boolean matrix powers.
#![allow(dead_code)]

use num_complex::Complex64;
use popdyn_core::{analyze_structure, spectral_radius, validate_model, LeslieModel, Matrix, PopulationModel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- oracles

/// Characteristic polynomial coefficients `c[0..=n]` of `det(λI - A)` by the
/// Faddeev–LeVerrier recursion (`c[n] = 1`).
pub fn char_poly(a: &Matrix) -> Vec<f64> {
    let n = a.order();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = vec![0.0; n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += a.get(i, l) * m[l * n + j];
                }
                next[i * n + j] = s;
            }
            next[i * n + i] += c[n - k + 1];
        }
        m = next;
        let mut trace = 0.0;
        for i in 0..n {
            for l in 0..n {
                trace += a.get(i, l) * m[l * n + i];
            }
        }
        c[n - k] = -trace / k as f64;
    }
    c
}

fn eval(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * z + ck)
}

fn eval_deriv(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &ck)| acc * z + ck * k as f64)
}

/// All roots of the monic polynomial `c` by Durand–Kerner, Newton-polished.
pub fn poly_roots(c: &[f64]) -> Vec<Complex64> {
    let mut c = c.to_vec();
    let mut roots = Vec::new();
    while c.len() > 1 && c[0] == 0.0 {
        roots.push(Complex64::new(0.0, 0.0));
        c.remove(0);
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return roots;
    }
    let bound = 1.0 + c[..deg].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(&c, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..5 {
            let d = eval_deriv(&c, *zi);
            if d.norm() == 0.0 {
                break;
            }
            let next = *zi - eval(&c, *zi) / d;
            if eval(&c, next).norm() < eval(&c, *zi).norm() {
                *zi = next;
            } else {
                break;
            }
        }
    }
    roots.extend(z);
    roots
}

/// Spectral radius as the largest root modulus of the characteristic polynomial.
pub fn spectral_radius_oracle(a: &Matrix) -> f64 {
    poly_roots(&char_poly(a)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Lengths of all simple cycles of the positivity digraph (edge j -> i for
/// `a[i][j] > 0`), by exhaustive DFS. Intended for n <= 7.
pub fn simple_cycle_lengths(a: &Matrix) -> Vec<usize> {
    let n = a.order();
    let mut lengths = Vec::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        dfs_cycles(a, start, start, 1, &mut on_path, &mut lengths);
    }
    lengths
}

fn dfs_cycles(a: &Matrix, start: usize, v: usize, len: usize, on_path: &mut [bool], out: &mut Vec<usize>) {
    on_path[v] = true;
    for w in 0..a.order() {
        if a.get(w, v) <= 0.0 {
            continue;
        }
        if w == start {
            out.push(len);
        } else if w > start && !on_path[w] {
            dfs_cycles(a, start, w, len + 1, on_path, out);
        }
    }
    on_path[v] = false;
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Boolean pattern of `A^k`.
pub fn pattern_power(a: &Matrix, k: usize) -> Vec<bool> {
    let n = a.order();
    let base: Vec<bool> = a.as_slice().iter().map(|&v| v > 0.0).collect();
    let mut acc: Vec<bool> = (0..n * n).map(|i| i / n == i % n).collect();
    for _ in 0..k {
        let mut next = vec![false; n * n];
        for i in 0..n {
            for l in 0..n {
                if !acc[i * n + l] {
                    continue;
                }
                for j in 0..n {
                    if base[l * n + j] {
                        next[i * n + j] = true;
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

/// Dense product without the library's matmul.
pub fn product(a: &Matrix, b: &Matrix) -> Vec<f64> {
    let n = a.order();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum();
        }
    }
    out
}

/// `sum_{k=0}^{terms-1} T^k`.
pub fn neumann_sum(t: &Matrix, terms: usize) -> Vec<f64> {
    let n = t.order();
    let mut power = Matrix::identity(n);
    let mut sum = vec![0.0; n * n];
    for _ in 0..terms {
        for (s, p) in sum.iter_mut().zip(power.as_slice()) {
            *s += p;
        }
        power = Matrix::from_row_major(n, product(&power, t)).unwrap();
    }
    sum
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Scales `v` to unit sum.
pub fn unit_sum(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

// ------------------------------------------------------------- generators

/// Random nonnegative matrix: each entry positive with probability
/// `density`, magnitude uniform in `[lo, hi)`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, density: f64, lo: f64, hi: f64) -> Matrix {
    let data = (0..n * n)
        .map(|_| if rng.gen_bool(density) { rng.gen_range(lo..hi) } else { 0.0 })
        .collect();
    Matrix::from_row_major(n, data).unwrap()
}

/// Nonzero transition matrix with `rho(T) <= max_rho`.
pub fn random_transition(rng: &mut ChaCha8Rng, n: usize, max_rho: f64) -> Matrix {
    let density = rng.gen_range(0.15..0.7);
    let mut t = random_matrix(rng, n, density, 0.01, 1.0);
    if t.is_zero() {
        let mut data = t.as_slice().to_vec();
        data[rng.gen_range(0..n * n)] = rng.gen_range(0.01..1.0);
        t = Matrix::from_row_major(n, data).unwrap();
    }
    let rho = spectral_radius(&t).unwrap();
    if rho > 0.0 {
        let target = rng.gen_range(0.05..max_rho);
        t = t.scaled(target / rho);
    }
    t
}

/// Nonzero fertility matrix; births land in a random subset of rows.
pub fn random_fertility(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let row_p = rng.gen_range(0.2..1.0);
    let density = rng.gen_range(0.2..0.8);
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        if !rng.gen_bool(row_p) {
            continue;
        }
        for j in 0..n {
            if rng.gen_bool(density) {
                data[i * n + j] = rng.gen_range(0.05..3.0);
            }
        }
    }
    if data.iter().all(|&v| v == 0.0) {
        data[rng.gen_range(0..n * n)] = rng.gen_range(0.05..3.0);
    }
    Matrix::from_row_major(n, data).unwrap()
}

/// Irreducible `T + F` with `T != 0` and `rho(T) <= 0.9`, order `1..=max_n`.
pub fn random_irreducible_model(rng: &mut ChaCha8Rng, max_n: usize) -> PopulationModel {
    loop {
        let n = rng.gen_range(1..=max_n);
        let t = random_transition(rng, n, 0.9);
        let f = random_fertility(rng, n);
        let model = validate_model(t, f).unwrap();
        if analyze_structure(model.projection()).irreducible {
            return model;
        }
    }
}

pub fn random_primitive_model(rng: &mut ChaCha8Rng, max_n: usize) -> PopulationModel {
    loop {
        let model = random_irreducible_model(rng, max_n);
        if analyze_structure(model.projection()).primitive {
            return model;
        }
    }
}

/// Possibly reducible models. A third of them are triangular in a random
/// ordering, which forces `R0 = 0`.
pub fn random_general_model(rng: &mut ChaCha8Rng, max_n: usize) -> PopulationModel {
    let n = rng.gen_range(1..=max_n);
    if n > 1 && rng.gen_bool(1.0 / 3.0) {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut t = vec![0.0; n * n];
        let mut f = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..a {
                let (i, j) = (order[a], order[b]);
                if rng.gen_bool(0.4) {
                    t[i * n + j] = rng.gen_range(0.05..1.0);
                }
                if rng.gen_bool(0.4) {
                    f[i * n + j] = rng.gen_range(0.05..3.0);
                }
            }
        }
        let (i, j) = (order[1], order[0]);
        f[i * n + j] += 1.0;
        return validate_model(Matrix::from_row_major(n, t).unwrap(), Matrix::from_row_major(n, f).unwrap()).unwrap();
    }
    let t = {
        let density = rng.gen_range(0.05..0.4);
        let t = random_matrix(rng, n, density, 0.01, 1.0);
        let rho = spectral_radius(&t).unwrap();
        if rho > 0.0 {
            t.scaled(rng.gen_range(0.05..0.9) / rho)
        } else {
            t
        }
    };
    let f = {
        let density = rng.gen_range(0.05..0.4);
        let mut f = random_matrix(rng, n, density, 0.05, 3.0);
        if f.is_zero() {
            let mut data = vec![0.0; n * n];
            data[rng.gen_range(0..n * n)] = 1.0;
            f = Matrix::from_row_major(n, data).unwrap();
        }
        f
    };
    validate_model(t, f).unwrap()
}

pub fn random_leslie(rng: &mut ChaCha8Rng, max_n: usize) -> LeslieModel {
    let n = rng.gen_range(1..=max_n);
    let survival = (0..n - 1).map(|_| rng.gen_range(0.05..=1.0)).collect();
    let mut fertility: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.6) { rng.gen_range(0.0..3.0) } else { 0.0 }).collect();
    if fertility.iter().all(|&f| f == 0.0) {
        fertility[rng.gen_range(0..n)] = rng.gen_range(0.1..3.0);
    }
    LeslieModel::new(survival, fertility).unwrap()
}
