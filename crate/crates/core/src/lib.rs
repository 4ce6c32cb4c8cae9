//! Perron–Frobenius analysis of matrix population models.
//!
//! A model advances a population vector by `x_k = (T + F) x_{k-1}`, where
//! `T` carries survival and class transitions and `F` carries births. This
//! crate computes the growth rate `r = rho(T + F)`, the next generation
//! matrix `Q = F (I - T)^{-1}` and net reproductive rate `R0 = rho(Q)`,
//! classifies models as stationary, growing or declining, rescales fertility
//! to hit a prescribed growth rate, and follows trajectories to their
//! (possibly periodic) limits.
//!
//! ```
//! use popdyn_core::{analyze, fixtures::plant_model, Trichotomy};
//!
//! let report = analyze(&plant_model()).unwrap();
//! assert!((report.net_reproductive_rate - 0.375).abs() < 1e-10);
//! assert_eq!(report.trichotomy, Trichotomy::Declining);
//! ```

pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod leslie;
pub mod matrix;
pub mod model;
pub mod spectral;
pub mod structure;
pub mod tolerance;

pub use dynamics::{
    classify_population, eventual_limit, fate, iterate, periodic_limits, EventualLimit, Fate, PeriodicLimits,
    PopulationClass, PopulationKind, Trajectory, TrajectoryStep,
};
pub use error::{Error, Result};
pub use leslie::{assemble, leslie_growth_rate, leslie_r0, q_poly_eval, LeslieModel};
pub use matrix::Matrix;
pub use model::{
    analyze, growth_scale_factor, next_generation_matrix, r0_positive, stabilizing_scale, target_growth_scale,
    validate_model, validate_model_with, AnalysisReport, FertilityScaling, PopulationModel, Trichotomy,
};
pub use spectral::{perron_pair, resolvent_inverse, spectral_radius, wielandt_bracket, SpectralPair};
pub use structure::{analyze_structure, next_gen_pattern, QPatternReport, StructureReport};
pub use tolerance::Tolerances;
