//! Projected stochastic subgradient loop.
//!
//! For `t = 1..=T`:
//!
//! ```text
//! g_t = oracle(w_{t-1})
//! w_t = project(w_{t-1} - γ_t g_t)
//! ```
//!
//! Every averaging scheme in a run absorbs the same iterate stream
//! `w_0, w_1, ..., w_T`, so schemes can be compared without sampling noise
//! between them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::averaging::{AveragerState, AveragingScheme};
use crate::error::{Error, Result};
use crate::projection::ProjectionDomain;
use crate::schedule::StepSchedule;
use crate::vector::WeightVector;

/// Random stream owned by one run.
pub type RandomStream = ChaCha8Rng;

/// Stream `stream` of the ChaCha8 generator seeded with `seed`.
///
/// Distinct `(seed, stream)` pairs give independent sequences; this is the
/// splitting rule used for every run in an experiment.
pub fn random_stream(seed: u64, stream: u64) -> RandomStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Source of stochastic subgradients.
///
/// Conditioned on `w`, the expectation of the returned vector over `rng`
/// must be a subgradient of the objective at `w`.
pub trait SubgradientOracle {
    fn subgradient(&mut self, w: &WeightVector, rng: &mut RandomStream) -> Vec<f64>;
}

/// Full (deterministic) objective, evaluated out-of-band.
pub trait Objective {
    fn value(&self, w: &WeightVector) -> f64;
}

impl<T: SubgradientOracle + ?Sized> SubgradientOracle for &mut T {
    fn subgradient(&mut self, w: &WeightVector, rng: &mut RandomStream) -> Vec<f64> {
        (**self).subgradient(w, rng)
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn value(&self, w: &WeightVector) -> f64 {
        (**self).value(w)
    }
}

/// `(μ/2)‖w‖²` with the exact gradient `μ w` as a noiseless oracle.
#[derive(Debug, Clone, Copy)]
pub struct Quadratic {
    pub mu: f64,
}

impl SubgradientOracle for Quadratic {
    fn subgradient(&mut self, w: &WeightVector, _rng: &mut RandomStream) -> Vec<f64> {
        w.as_slice().iter().map(|x| self.mu * x).collect()
    }
}

impl Objective for Quadratic {
    fn value(&self, w: &WeightVector) -> f64 {
        0.5 * self.mu * w.norm_squared()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub schedule: StepSchedule,
    pub schemes: Vec<AveragingScheme>,
    pub domain: ProjectionDomain,
    pub total_iterations: u64,
    pub seed: u64,
    /// Stream index passed to [`random_stream`] together with `seed`.
    pub stream: u64,
    pub evaluations_per_pass: u64,
    /// Dataset size, used for effective-pass accounting.
    pub n: u64,
}

impl RunConfig {
    /// Unconstrained run with seed 0 and one evaluation per pass.
    pub fn new(
        schedule: StepSchedule,
        schemes: Vec<AveragingScheme>,
        total_iterations: u64,
        n: u64,
    ) -> Self {
        Self {
            schedule,
            schemes,
            domain: ProjectionDomain::WholeSpace,
            total_iterations,
            seed: 0,
            stream: 0,
            evaluations_per_pass: 1,
            n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_iterations == 0 {
            return Err(Error::Config("total iterations must be ≥ 1".into()));
        }
        if self.n == 0 {
            return Err(Error::Config("dataset size must be ≥ 1".into()));
        }
        if self.evaluations_per_pass == 0 {
            return Err(Error::Config("evaluations per pass must be ≥ 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("at least one averaging scheme is required".into()));
        }
        Ok(())
    }

    pub fn evaluation_times(&self) -> Vec<u64> {
        evaluation_times(self.total_iterations, self.n, self.evaluations_per_pass)
    }
}

/// About `evaluations_per_pass · T / n` evenly spaced times in `1..=T`,
/// always ending at `T`.
pub fn evaluation_times(total_iterations: u64, n: u64, evaluations_per_pass: u64) -> Vec<u64> {
    let t = total_iterations as u128;
    let count = (evaluations_per_pass as u128 * t / n.max(1) as u128).clamp(1, t.max(1));
    (1..=count)
        .map(|i| (i * t).div_ceil(count) as u64)
        .collect()
}

/// One evaluated point of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub scheme_name: String,
    pub schedule_name: String,
    pub seed: u64,
    pub t: u64,
    /// `t / n`.
    pub effective_passes: f64,
    pub objective: f64,
    /// Norm of the reported point.
    pub iterate_norm: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<RunRecord>,
    pub final_iterate: WeightVector,
    /// Reported point of each scheme after `w_T`, in config order.
    pub final_averages: Vec<WeightVector>,
}

/// Hooks into a run; both default to no-ops.
pub trait RunObserver {
    fn on_step(&mut self, _t: u64, _step_size: f64, _subgradient: &[f64], _iterate: &WeightVector) {}

    fn on_evaluation(&mut self, _t: u64, _scheme: usize, _point: &WeightVector, _objective: f64) {}
}

impl RunObserver for () {}

pub fn run<O, F>(
    oracle: &mut O,
    objective: &F,
    config: &RunConfig,
    w0: &WeightVector,
) -> Result<RunOutcome>
where
    O: SubgradientOracle + ?Sized,
    F: Objective + ?Sized,
{
    run_observed(oracle, objective, config, w0, &mut ())
}

pub fn run_observed<O, F, V>(
    oracle: &mut O,
    objective: &F,
    config: &RunConfig,
    w0: &WeightVector,
    observer: &mut V,
) -> Result<RunOutcome>
where
    O: SubgradientOracle + ?Sized,
    F: Objective + ?Sized,
    V: RunObserver + ?Sized,
{
    config.validate()?;
    if let Some(radius) = config.domain.radius() {
        if w0.norm() > radius {
            return Err(Error::InvalidParameter(
                "initial point lies outside the projection domain".into(),
            ));
        }
    }

    let dim = w0.dim();
    let mut rng = random_stream(config.seed, config.stream);
    let mut states: Vec<AveragerState> = config
        .schemes
        .iter()
        .map(|&s| AveragerState::new(s, dim))
        .collect();
    for state in &mut states {
        state.absorb(w0, 0)?;
    }

    let schedule_name = config.schedule.to_string();
    let scheme_names: Vec<String> = config.schemes.iter().map(|s| s.to_string()).collect();
    let times = config.evaluation_times();
    let mut next_eval = times.iter().peekable();
    let mut records = Vec::with_capacity(times.len() * states.len());

    let mut w = w0.clone();
    let mut buffer = vec![0.0; dim];
    for t in 1..=config.total_iterations {
        let gamma = config.schedule.step_size(t)?;
        let g = oracle.subgradient(&w, &mut rng);
        if g.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
        for ((b, x), gi) in buffer.iter_mut().zip(w.as_slice()).zip(&g) {
            *b = x - gamma * gi;
        }
        if !buffer.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence { t });
        }
        w = WeightVector::from_finite(buffer.clone());
        config.domain.project_in_place(&mut w);
        observer.on_step(t, gamma, &g, &w);

        for state in &mut states {
            state.absorb(&w, t)?;
        }

        if next_eval.peek() == Some(&&t) {
            next_eval.next();
            for (i, state) in states.iter().enumerate() {
                let point = state.current_average();
                let value = objective.value(point);
                if !value.is_finite() {
                    return Err(Error::Divergence { t });
                }
                observer.on_evaluation(t, i, point, value);
                records.push(RunRecord {
                    scheme_name: scheme_names[i].clone(),
                    schedule_name: schedule_name.clone(),
                    seed: config.seed,
                    t,
                    effective_passes: t as f64 / config.n as f64,
                    objective: value,
                    iterate_norm: point.norm(),
                });
            }
        }
    }

    Ok(RunOutcome {
        records,
        final_iterate: w,
        final_averages: states
            .into_iter()
            .map(|s| s.current_average().clone())
            .collect(),
    })
}
