//! Reference models with known closed-form answers.

use crate::matrix::Matrix;
use crate::model::{validate_model, PopulationModel};

/// Transition matrix of a five-class plant lifecycle with vegetative and
/// seed reproduction.
pub fn plant_transition() -> Matrix {
    Matrix::from_rows(&[
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0],
    ])
    .expect("valid fixture")
    .scaled(0.5)
}

pub fn plant_fertility() -> Matrix {
    Matrix::from_rows(&[
        [0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0],
    ])
    .expect("valid fixture")
    .scaled(0.5)
}

/// Irreducible with imprimitivity index 2, `r = sqrt(2)/2`, `R0 = 3/8`.
pub fn plant_model() -> PopulationModel {
    validate_model(plant_transition(), plant_fertility()).expect("valid fixture")
}
