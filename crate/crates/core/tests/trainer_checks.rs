//! Trainer-level properties: gradient checks across random initializations,
//! distribution recovery under the likelihood loss, and bookkeeping of the
//! early-stopping loop.

use concord_core::scenario::GroupHazards;
use concord_core::{
    builtin_scenario, generate, train, BuiltinScenario, DiscreteHazardModel, RankingVariant,
    SurvivalDataset, SurvivalRecord, TimeMode, TrainConfig,
};
use concord_core::train::gradient_check;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_batch(seed: u64) -> SurvivalDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records: Vec<SurvivalRecord> = (0..8)
        .map(|_| {
            SurvivalRecord::new(
                rng.random_range(1..=10) as f64,
                rng.random::<f64>() < 0.7,
                vec![
                    rng.random_range(0..=1) as f64,
                    rng.random_range(0..=1) as f64,
                ],
            )
        })
        .collect();
    SurvivalDataset::new(records, TimeMode::Discrete, vec!["z0".into(), "z1".into()]).unwrap()
}

#[test]
fn gradients_match_finite_differences_at_ten_random_inits() {
    let idx: Vec<usize> = (0..8).collect();
    for init in 0..10 {
        let data = small_batch(500 + init);
        for variant in [RankingVariant::None, RankingVariant::Td, RankingVariant::Alpha] {
            let model = DiscreteHazardModel::new_random(2, 6, 10, 900 + init);
            let err = gradient_check(&model, &data, &idx, variant, 0.1, 1.0);
            assert!(
                err < 1e-4,
                "init {init}, variant {variant}: max rel err {err}"
            );
        }
    }
}

#[test]
fn likelihood_only_training_recovers_the_per_group_pmf() {
    // Noiseless single-covariate variant of the discrete crossing scenario:
    // two groups of 10000, no noise columns. A likelihood-only fit must land
    // within total-variation 0.05 of the true pmf per group.
    let mut spec = builtin_scenario(BuiltinScenario::M6);
    spec.noise_covariates = 0;
    let data = generate(&spec, 2718).unwrap();
    let cfg = TrainConfig {
        variant: RankingVariant::None,
        ranking_weight: 0.0,
        max_epochs: 40,
        seed: 1,
        ..TrainConfig::default()
    };
    let outcome = train(&data, &cfg).unwrap();
    let GroupHazards::Discrete(tables) = &spec.hazards else {
        panic!()
    };
    for (g, table) in tables.iter().enumerate() {
        let mut truth: Vec<f64> = (1..=10).map(|t| table.pmf(t)).collect();
        truth.push(table.survival_after(10));
        let predicted = outcome.model.pmf(&[g as f64]);
        let tv: f64 = truth
            .iter()
            .zip(&predicted)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.05, "group {g}: total variation {tv}");
    }
}

#[test]
fn pmf_stays_normalized_during_training() {
    let mut spec = builtin_scenario(BuiltinScenario::M6);
    spec.group_sizes = vec![600, 600];
    let data = generate(&spec, 12).unwrap();
    let cfg = TrainConfig {
        variant: RankingVariant::Alpha,
        max_epochs: 3,
        patience: 5,
        seed: 3,
        ..TrainConfig::default()
    };
    let outcome = train(&data, &cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let z: Vec<f64> = (0..10).map(|_| rng.random_range(0..=1) as f64).collect();
        let pmf = outcome.model.pmf(&z);
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(pmf.iter().all(|&p| p >= 0.0));
        for t in 1..=10usize {
            let h = outcome.model.discrete_hazard(t, &z);
            assert!((0.0..=1.0).contains(&h));
        }
    }
}

#[test]
fn early_stopping_keeps_the_best_epoch() {
    let mut spec = builtin_scenario(BuiltinScenario::M6);
    spec.group_sizes = vec![800, 800];
    let data = generate(&spec, 5).unwrap();
    let cfg = TrainConfig {
        variant: RankingVariant::Td,
        max_epochs: 30,
        patience: 3,
        seed: 9,
        ..TrainConfig::default()
    };
    let outcome = train(&data, &cfg).unwrap();
    let best_logged = outcome
        .log
        .iter()
        .map(|e| e.validation)
        .fold(f64::NEG_INFINITY, f64::max);
    let kept = outcome
        .log
        .iter()
        .find(|e| e.epoch == outcome.best_epoch)
        .unwrap();
    assert_eq!(kept.validation, best_logged);
    // Training halted within patience epochs of the best one.
    let last = outcome.log.last().unwrap().epoch;
    assert!(last <= outcome.best_epoch + cfg.patience);
    // Split sizes follow the 80/4/16 fractions.
    assert_eq!(outcome.split.train.len(), 1280);
    assert_eq!(outcome.split.val.len(), 64);
    assert_eq!(outcome.split.test.len(), 256);
}

#[test]
fn training_is_deterministic_per_seed() {
    let mut spec = builtin_scenario(BuiltinScenario::M6);
    spec.group_sizes = vec![500, 500];
    let data = generate(&spec, 6).unwrap();
    let cfg = TrainConfig {
        variant: RankingVariant::Alpha,
        max_epochs: 4,
        seed: 31,
        ..TrainConfig::default()
    };
    let a = train(&data, &cfg).unwrap();
    let b = train(&data, &cfg).unwrap();
    assert_eq!(a.model, b.model);
    assert_eq!(a.log.len(), b.log.len());
    for (x, y) in a.log.iter().zip(&b.log) {
        assert_eq!(x, y);
    }
}
