mod common;

use wavg_core::{estimate_fstar, DataSource, FStarConfig, SamplingStrategy, SyntheticSpec};

fn load(n: usize, p: usize, noise: f64) -> wavg_core::Dataset {
    DataSource::Synthetic { spec: SyntheticSpec { n, p, noise }, seed: 3 }
        .load()
        .unwrap()
}

#[test]
fn dual_oracle_closes_the_gap() {
    let d = load(300, 6, 0.1);
    let lambda = 1.0 / 300.0;
    let (primal, dual, w) = common::dual_optimum(&d, lambda);
    assert!(primal - dual <= 1e-10 * primal, "{primal} vs {dual}");
    assert_eq!(common::objective(&d, lambda, w.as_slice()), primal);
}

#[test]
fn estimate_sits_just_above_the_optimum() {
    for (n, noise) in [(300, 0.0), (300, 0.2), (600, 0.1)] {
        let d = load(n, 8, noise);
        let lambda = 1.0 / n as f64;
        let exact = common::dual_optimum(&d, lambda).0;
        let est = estimate_fstar(&d, lambda, SamplingStrategy::WithReplacement, FStarConfig::new(30, 10)).unwrap();
        assert!(est.value >= exact - 1e-12, "{} below optimum {exact}", est.value);
        assert!(est.value - exact <= 1e-2 * exact, "{} vs {exact}", est.value);
        assert_eq!(est.iterations, 300 * n as u64);
    }
}

#[test]
fn permuted_passes_estimate_agrees() {
    let d = load(400, 5, 0.1);
    let lambda = 1.0 / 400.0;
    let exact = common::dual_optimum(&d, lambda).0;
    let est = estimate_fstar(&d, lambda, SamplingStrategy::PermutedPasses, FStarConfig::new(30, 10)).unwrap();
    assert!(est.value >= exact - 1e-12);
    assert!(est.value - exact <= 1e-2 * exact);
}
