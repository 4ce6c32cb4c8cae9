//! Workloads shared by the criterion benches.

use popdyn_core::{LeslieModel, Matrix, PopulationModel, validate_model};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A dense irreducible model of order `n` with `rho(T)` well below one.
pub fn dense_model(n: usize, seed: u64) -> PopulationModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.0..1.0) / n as f64 * 0.8).collect();
    let f: Vec<f64> = (0..n * n).map(|_| if rng.gen_bool(0.3) { rng.gen_range(0.0..2.0) } else { 0.0 }).collect();
    let mut f = f;
    f[0] += 1.0;
    validate_model(
        Matrix::from_row_major(n, t).expect("valid transition"),
        Matrix::from_row_major(n, f).expect("valid fertility"),
    )
    .expect("valid model")
}

/// An `n`-class Leslie model with survival 0.9 and late-life fertility.
pub fn leslie_model(n: usize) -> LeslieModel {
    let survival = vec![0.9; n - 1];
    let fertility = (0..n).map(|i| if i >= n / 3 { 0.5 } else { 0.0 }).collect();
    LeslieModel::new(survival, fertility).expect("valid Leslie model")
}
