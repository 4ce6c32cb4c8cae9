mod common;

use common::*;
use popdyn_core::{
    classify_population, eventual_limit, fixtures, iterate, perron_pair, periodic_limits, Error, Fate, Matrix,
    PopulationKind,
};
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 100, ..ProptestConfig::default() }
}

fn population(g: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<f64> {
    let x: Vec<f64> = (0..n).map(|_| if g.gen_bool(0.7) { g.gen_range(0.0..5.0) } else { 0.0 }).collect();
    if x.iter().all(|&v| v == 0.0) {
        vec![1.0; n]
    } else {
        x
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn iteration_is_linear(seed in any::<u64>(), a in 0.0f64..3.0, b in 0.0f64..3.0) {
        let mut g = rng(seed);
        let model = random_irreducible_model(&mut g, 8);
        let n = model.order();
        let (x, y) = (population(&mut g, n), population(&mut g, n));
        let z: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let steps = 15;
        let (tx, ty, tz) = (
            iterate(&model, &x, steps, false).unwrap(),
            iterate(&model, &y, steps, false).unwrap(),
            iterate(&model, &z, steps, false).unwrap(),
        );
        for k in 0..=steps {
            let combo: Vec<f64> = tx.steps[k].population.iter().zip(&ty.steps[k].population).map(|(p, q)| a * p + b * q).collect();
            let scale = combo.iter().fold(1.0f64, |m, v| m.max(*v));
            prop_assert!(max_abs_diff(&combo, &tz.steps[k].population) <= 1e-12 * scale);
        }
    }

    #[test]
    fn normalized_powers_approach_rank_one_projector(seed in any::<u64>()) {
        let mut g = rng(seed);
        let model = random_primitive_model(&mut g, 6);
        let p = model.projection();
        let pair = perron_pair(p).unwrap();
        let mut power = Matrix::identity(model.order());
        let unit = p.scaled(1.0 / pair.rho);
        let mut gap = f64::INFINITY;
        for _ in 0..4000 {
            power = power.matmul(&unit).unwrap();
            let n = model.order();
            gap = (0..n * n)
                .map(|k| (power.as_slice()[k] - pair.right[k / n] * pair.left[k % n]).abs())
                .fold(0.0, f64::max);
            if gap <= 1e-8 {
                break;
            }
        }
        prop_assert!(gap <= 1e-6, "gap {gap}");
    }

    #[test]
    fn limit_is_perron_projection(seed in any::<u64>()) {
        let mut g = rng(seed);
        let model = random_primitive_model(&mut g, 8);
        let x0 = population(&mut g, model.order());
        let pair = perron_pair(model.projection()).unwrap();
        let w: f64 = pair.left.iter().zip(&x0).map(|(a, b)| a * b).sum();
        let lim = eventual_limit(&model, &x0).unwrap();
        let expected: Vec<f64> = pair.right.iter().map(|u| w * u).collect();
        let scale = expected.iter().fold(1.0f64, |m, v| m.max(*v));
        prop_assert!(max_abs_diff(&lim.limit, &expected) <= 1e-6 * scale);
        prop_assert_eq!(lim.fate, if pair.rho < 1.0 { Fate::Extinct } else { Fate::Unbounded });
    }

    #[test]
    fn normalized_trajectories_stay_bounded(seed in any::<u64>()) {
        let mut g = rng(seed);
        let model = random_irreducible_model(&mut g, 8);
        let x0 = population(&mut g, model.order());
        let pair = perron_pair(model.projection()).unwrap();
        // x_k / r^k stays below (max x0_i / u_i) u
        let c = x0.iter().zip(&pair.right).map(|(x, u)| x / u).fold(0.0, f64::max);
        let traj = iterate(&model, &x0, 300, true).unwrap();
        for step in &traj.steps {
            for (x, u) in step.population.iter().zip(&pair.right) {
                prop_assert!(*x <= c * u * (1.0 + 1e-8) + 1e-12);
            }
        }
    }

    #[test]
    fn perron_vector_is_stable(seed in any::<u64>()) {
        let mut g = rng(seed);
        let model = random_irreducible_model(&mut g, 8);
        let pair = perron_pair(model.projection()).unwrap();
        let class = classify_population(&model, &pair.right).unwrap();
        prop_assert!(class.is_stable());
    }
}

#[test]
fn periodic_limits_on_cyclic_permutation() {
    let t = Matrix::from_rows(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap().scaled(0.5);
    let f = Matrix::from_rows(&[[0.0, 0.0, 8.0], [0.0; 3], [0.0; 3]]).unwrap();
    let model = popdyn_core::validate_model(t, f).unwrap();
    // r^3 = 0.5 * 0.5 * 8 = 2
    let res = periodic_limits(&model, &[1.0, 0.0, 0.0]).unwrap();
    assert_eq!(res.d, 3);
    assert!((res.growth_rate - 2f64.cbrt()).abs() < 1e-9);
    for (i, limit) in res.limits.iter().enumerate() {
        let support: Vec<usize> = (0..3).filter(|&k| limit[k] > 1e-9).collect();
        assert_eq!(support, vec![i % 3]);
    }
    assert!(matches!(eventual_limit(&model, &[1.0, 0.0, 0.0]), Err(Error::NotPrimitive { d: 3 })));
}

#[test]
fn plant_oscillates_between_two_limits() {
    let plant = fixtures::plant_model();
    let res = periodic_limits(&plant, &[1.0, 0.0, 2.0, 0.0, 0.0]).unwrap();
    assert_eq!(res.d, 2);
    assert!(max_abs_diff(&res.limits[0], &res.limits[1]) > 1e-3);
}

#[test]
fn plant_stable_vector_is_classified_stable() {
    let plant = fixtures::plant_model();
    let s2 = 2f64.sqrt();
    let class = classify_population(&plant, &[s2, 1.0, 3.0, 2.0 * s2, 2.0]).unwrap();
    match class.kind {
        PopulationKind::Stable(r) => assert!((r - s2 / 2.0).abs() < 1e-9),
        other => panic!("expected stable, got {other:?}"),
    }
    let off = classify_population(&plant, &[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    assert!(!off.is_stable());
}

#[test]
fn rejects_bad_populations() {
    let plant = fixtures::plant_model();
    assert!(matches!(iterate(&plant, &[1.0; 4], 3, false), Err(Error::InvalidPopulation(_)) | Err(Error::DimensionMismatch { .. })));
    assert!(iterate(&plant, &[-1.0, 0.0, 0.0, 0.0, 0.0], 3, false).is_err());
    assert!(iterate(&plant, &[0.0; 5], 3, false).is_err());
}
