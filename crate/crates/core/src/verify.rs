//! Runtime checks of the convergence argument on concrete problems.
//!
//! Each check returns a [`CheckResult`]; failures are reported, never raised.

use std::fmt;

use rand::Rng;

use crate::averaging::{closed_form_average, AveragerState, AveragingScheme};
use crate::data::{synthesize, preprocess, Dataset, SyntheticSpec};
use crate::error::Result;
use crate::experiment::{estimate_fstar, FStarConfig};
use crate::schedule::StepSchedule;
use crate::solver::{random_stream, run_observed, RunConfig, RunObserver};
use crate::svm::{variance_bound, SamplingStrategy, SvmObjective, SvmOracle};
use crate::vector::WeightVector;

/// Both sides of
/// `Σ_{t=1}^{T} [t(t-1) a_{t-1} - t(t+1) a_t] = -T(T+1) a_T`
/// for `a = (a_0, ..., a_T)`.
pub fn telescoping_sides(a: &[f64]) -> (f64, f64) {
    let horizon = a.len().saturating_sub(1);
    let lhs = (1..=horizon)
        .map(|t| {
            let tf = t as f64;
            tf * (tf - 1.0) * a[t - 1] - tf * (tf + 1.0) * a[t]
        })
        .sum();
    let tf = horizon as f64;
    (lhs, -tf * (tf + 1.0) * a[horizon])
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub synthetic: SyntheticSpec,
    pub data_seed: u64,
    pub passes: u64,
    pub seeds: Vec<u64>,
    pub fstar_multiplier: u64,
    /// Seed of the random sequences used by the algebraic checks.
    pub seed: u64,
    /// Random sequences per algebraic check.
    pub sequences: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            synthetic: SyntheticSpec {
                n: 1000,
                p: 20,
                noise: 0.1,
            },
            data_seed: 0,
            passes: 20,
            seeds: (0..10).collect(),
            fstar_multiplier: 10,
            seed: 0,
            sequences: 200,
        }
    }
}

/// Telescoping identity on the hand case `(5, 1, 2)` and on random
/// sequences of length ≤ 50, to `1e-9` relative.
pub fn check_telescoping(sequences: usize, seed: u64) -> CheckResult {
    let mut rng = random_stream(seed, 1);
    let mut worst: f64 = 0.0;
    let (lhs, rhs) = telescoping_sides(&[5.0, 1.0, 2.0]);
    let hand_ok = lhs == -12.0 && rhs == -12.0;
    for _ in 0..sequences {
        let len = rng.random_range(1..=50);
        let a: Vec<f64> = (0..len).map(|_| rng.random_range(-10.0..10.0)).collect();
        let (lhs, rhs) = telescoping_sides(&a);
        let scale: f64 = a
            .iter()
            .enumerate()
            .map(|(t, v)| ((t * (t + 1)) as f64 * v).abs())
            .sum::<f64>()
            .max(1.0);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    CheckResult {
        name: "telescoping identity",
        passed: hand_ok && worst <= 1e-9,
        detail: format!("(5,1,2) -> {lhs} vs {rhs}; worst relative error {worst:.3e} over {sequences} sequences"),
    }
}

/// Online recurrences against [`closed_form_average`] for every scheme.
pub fn check_averaging(sequences: usize, seed: u64) -> CheckResult {
    let mut rng = random_stream(seed, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..sequences {
        let len = rng.random_range(1..=200);
        let dim = rng.random_range(1..=5);
        let iterates: Vec<WeightVector> = (0..len)
            .map(|_| {
                WeightVector::new((0..dim).map(|_| rng.random_range(-10.0..10.0)).collect())
                    .expect("finite draws")
            })
            .collect();
        let horizon = rng.random_range(1..=len as u64);
        let schemes = AveragingScheme::standard_set(horizon).into_iter().chain([
            AveragingScheme::PolyWeight { k: 3 },
            AveragingScheme::PolyDecay { eta: 0 },
            AveragingScheme::PolyDecay { eta: 2 },
        ]);
        for scheme in schemes {
            let mut state = AveragerState::new(scheme, dim);
            for (t, w) in iterates.iter().enumerate() {
                state.absorb(w, t as u64).expect("indices are in order");
            }
            let closed = closed_form_average(&iterates, scheme).expect("non-empty");
            let err = state.current_average().distance_squared(&closed).sqrt() / (1.0 + closed.norm());
            worst = worst.max(err);
        }
    }
    CheckResult {
        name: "online vs closed-form averaging",
        passed: worst <= 1e-10,
        detail: format!("worst relative error {worst:.3e} over {sequences} sequences"),
    }
}

#[derive(Default)]
struct NormTracker {
    max_iterate_norm: f64,
    sum_g2: f64,
    steps: u64,
    max_mu_gamma: f64,
    mu: f64,
}

impl RunObserver for NormTracker {
    fn on_step(&mut self, _t: u64, gamma: f64, g: &[f64], w: &WeightVector) {
        self.max_iterate_norm = self.max_iterate_norm.max(w.norm());
        self.sum_g2 += g.iter().map(|x| x * x).sum::<f64>();
        self.steps += 1;
        self.max_mu_gamma = self.max_mu_gamma.max(self.mu * gamma);
    }
}

/// Observed iterate and subgradient sizes of one SVM run from `w_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormStats {
    pub max_iterate_norm: f64,
    pub mean_subgradient_norm_squared: f64,
    pub max_lambda_gamma: f64,
}

pub fn svm_norm_stats(
    dataset: &Dataset,
    lambda: f64,
    schedule: StepSchedule,
    iterations: u64,
    seed: u64,
) -> Result<NormStats> {
    let objective = SvmObjective::new(dataset, lambda)?;
    let mut oracle = SvmOracle::new(dataset, lambda, SamplingStrategy::WithReplacement);
    let mut rc = RunConfig::new(schedule, vec![AveragingScheme::NoAveraging], iterations, dataset.len() as u64);
    rc.seed = seed;
    // only the final point is evaluated
    rc.evaluations_per_pass = 1;
    rc.n = iterations;
    let mut tracker = NormTracker {
        mu: lambda,
        ..Default::default()
    };
    run_observed(&mut oracle, &objective, &rc, &WeightVector::zeros(dataset.dim()), &mut tracker)?;
    Ok(NormStats {
        max_iterate_norm: tracker.max_iterate_norm,
        mean_subgradient_norm_squared: tracker.sum_g2 / tracker.steps as f64,
        max_lambda_gamma: tracker.max_mu_gamma,
    })
}

/// `‖w_t‖ ≤ L/λ` and mean `‖g_t‖² ≤ 4L²` with `L = max_i ‖x_i‖`, for both
/// published schedules.
pub fn check_norm_bound(dataset: &Dataset, lambda: f64, iterations: u64, seeds: &[u64]) -> Result<CheckResult> {
    let l = dataset.max_norm();
    let mut passed = true;
    let mut worst_ratio: f64 = 0.0;
    let mut worst_g2: f64 = 0.0;
    for schedule in [StepSchedule::classical(lambda)?, StepSchedule::proposed(lambda)?] {
        for &seed in seeds {
            let stats = svm_norm_stats(dataset, lambda, schedule, iterations, seed)?;
            passed &= stats.max_iterate_norm <= l / lambda + 1e-9;
            passed &= stats.mean_subgradient_norm_squared <= 4.0 * l * l;
            passed &= stats.max_lambda_gamma <= 1.0 + 1e-15;
            worst_ratio = worst_ratio.max(stats.max_iterate_norm / (l / lambda));
            worst_g2 = worst_g2.max(stats.mean_subgradient_norm_squared / (4.0 * l * l));
        }
    }
    Ok(CheckResult {
        name: "iterate norm bound",
        passed,
        detail: format!(
            "max ‖w_t‖ / (L/λ) = {worst_ratio:.4}, max mean‖g‖² / 4L² = {worst_g2:.4} (L = {l:.4})"
        ),
    })
}

/// Seed-mean gap of (W, proposed) at every evaluation point `t ≥ n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapCurve {
    pub times: Vec<u64>,
    pub mean_gaps: Vec<f64>,
    pub bounds: Vec<f64>,
}

/// `E f(avg_T) - f* ≤ 2B²/(λ(T+1))` for the `W` average with the proposed
/// step, using the empirical variance bound and an estimated `f*`.
pub fn check_weighted_bound(dataset: &Dataset, lambda: f64, passes: u64, seeds: &[u64], fstar_multiplier: u64) -> Result<(CheckResult, GapCurve)> {
    let n = dataset.len() as u64;
    let objective = SvmObjective::new(dataset, lambda)?;
    let b2 = variance_bound(dataset, lambda);
    let schedule = StepSchedule::proposed(lambda)?;
    let fstar = estimate_fstar(
        dataset,
        lambda,
        SamplingStrategy::WithReplacement,
        FStarConfig::new(passes, fstar_multiplier),
    )?;

    let mut sums: Vec<f64> = Vec::new();
    let mut times: Vec<u64> = Vec::new();
    for &seed in seeds {
        let mut oracle = SvmOracle::new(dataset, lambda, SamplingStrategy::WithReplacement);
        let mut rc = RunConfig::new(schedule, vec![AveragingScheme::PolyWeight { k: 1 }], passes * n, n);
        rc.seed = seed;
        let out = crate::solver::run(&mut oracle, &objective, &rc, &WeightVector::zeros(dataset.dim()))?;
        if sums.is_empty() {
            sums = vec![0.0; out.records.len()];
            times = out.records.iter().map(|r| r.t).collect();
        }
        for (s, r) in sums.iter_mut().zip(&out.records) {
            *s += r.objective - fstar.value;
        }
    }
    let mut curve = GapCurve {
        times: Vec::new(),
        mean_gaps: Vec::new(),
        bounds: Vec::new(),
    };
    for (t, s) in times.into_iter().zip(sums) {
        if t >= n {
            curve.times.push(t);
            curve.mean_gaps.push(s / seeds.len() as f64);
            curve.bounds.push(2.0 * b2 / (lambda * (t as f64 + 1.0)));
        }
    }
    let worst = curve
        .mean_gaps
        .iter()
        .zip(&curve.bounds)
        .map(|(g, b)| g / b)
        .fold(f64::NEG_INFINITY, f64::max);
    let result = CheckResult {
        name: "weighted-average gap bound",
        passed: curve.mean_gaps.iter().zip(&curve.bounds).all(|(g, b)| g <= b),
        detail: format!(
            "max mean gap / bound = {worst:.3e} over {} points (B² = {b2:.4}, f* ≈ {:.6})",
            curve.times.len(),
            fstar.value
        ),
    };
    Ok((result, curve))
}

/// Run all checks on a synthetic problem with `λ = 1/n`.
pub fn verify_suite(config: &VerifyConfig) -> Result<VerifyReport> {
    let (raw, _) = synthesize(config.synthetic, config.data_seed)?;
    let dataset = preprocess(&raw)?;
    let lambda = 1.0 / dataset.len() as f64;
    let iterations = config.passes * dataset.len() as u64;

    let checks = vec![
        check_telescoping(config.sequences, config.seed),
        check_norm_bound(&dataset, lambda, iterations, &config.seeds)?,
        check_weighted_bound(&dataset, lambda, config.passes, &config.seeds, config.fstar_multiplier)?.0,
        check_averaging(config.sequences, config.seed),
    ];
    Ok(VerifyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn telescoping_examples() {
        assert_eq!(telescoping_sides(&[5.0, 1.0, 2.0]), (-12.0, -12.0));
        assert_eq!(telescoping_sides(&[0.0; 6]), (0.0, 0.0));
        // T = 0: empty sum, and -0·1·a_0 = 0
        assert_eq!(telescoping_sides(&[3.0]).0, 0.0);
        assert_eq!(telescoping_sides(&[3.0]).1, 0.0);
    }

    #[test]
    fn algebraic_checks_pass() {
        assert!(check_telescoping(200, 1).passed);
        assert!(check_averaging(50, 1).passed);
    }

    #[test]
    fn small_suite_passes() {
        let config = VerifyConfig {
            synthetic: SyntheticSpec { n: 200, p: 5, noise: 0.1 },
            passes: 5,
            seeds: vec![0, 1, 2],
            sequences: 20,
            ..VerifyConfig::default()
        };
        let report = verify_suite(&config).unwrap();
        assert_eq!(report.checks.len(), 4);
        assert!(report.all_passed(), "{report}");
    }
}
