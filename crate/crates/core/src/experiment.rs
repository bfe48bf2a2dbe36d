//! Scheme × schedule × seed experiment grid over an SVM problem.
//!
//! Each (arm, seed) pair is one solver run. Run `i` of arm `a` with seed `s`
//! draws its samples from `random_stream(s, a)`, so results do not depend on
//! how runs are scheduled across threads. Rows are written in the order
//! (arm, scheme, seed, t).

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::averaging::AveragingScheme;
use crate::data::{preprocess, read_libsvm, synthesize, Dataset, SyntheticSpec};
use crate::error::{Error, Result};
use crate::projection::ProjectionDomain;
use crate::schedule::StepSchedule;
use crate::solver::{run, run_observed, Objective, RunConfig, RunObserver, SubgradientOracle};
use crate::svm::{SamplingStrategy, SvmObjective, SvmOracle};
use crate::vector::WeightVector;

/// Exact CSV header.
pub const CSV_HEADER: [&str; 8] = [
    "run_id",
    "scheme",
    "schedule",
    "seed",
    "t",
    "effective_passes",
    "objective",
    "iterate_norm",
];

/// Stream index reserved for the f* reference runs.
const FSTAR_STREAM: u64 = 1 << 32;

/// Number of reference runs behind an f* estimate.
pub const FSTAR_SEEDS: u64 = 3;

/// Smallest accepted ratio between the f* budget and the experiment budget.
pub const MIN_FSTAR_MULTIPLIER: u64 = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Libsvm(PathBuf),
    Synthetic { spec: SyntheticSpec, seed: u64 },
}

impl DataSource {
    /// Load and preprocess: dense data is standardized, then a bias feature
    /// is appended.
    pub fn load(&self) -> Result<Dataset> {
        let raw = match self {
            DataSource::Libsvm(path) => read_libsvm(path)?,
            DataSource::Synthetic { spec, seed } => synthesize(*spec, *seed)?.0,
        };
        preprocess(&raw)
    }
}

/// Regularization strength; `1/n` is resolved after loading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    InverseN,
    Value(f64),
}

impl Lambda {
    pub fn resolve(self, n: usize) -> f64 {
        match self {
            Lambda::InverseN => 1.0 / n as f64,
            Lambda::Value(v) => v,
        }
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "1/n" {
            return Ok(Lambda::InverseN);
        }
        match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(Lambda::Value(v)),
            _ => Err(Error::Config(format!(
                "lambda must be a positive number or `1/n`, got `{s}`"
            ))),
        }
    }
}

/// Step-size family before `μ` is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepKind {
    Classical,
    Proposed,
    General { c: f64, b: f64 },
}

impl StepKind {
    pub fn with_mu(self, mu: f64) -> Result<StepSchedule> {
        match self {
            StepKind::Classical => StepSchedule::classical(mu),
            StepKind::Proposed => StepSchedule::proposed(mu),
            StepKind::General { c, b } => StepSchedule::general(mu, c, b),
        }
    }
}

/// Parses `classical`, `proposed` or `general:<c>,<b>`.
impl FromStr for StepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown step schedule `{s}`"));
        match s.trim() {
            "classical" => Ok(StepKind::Classical),
            "proposed" => Ok(StepKind::Proposed),
            other => {
                let params = other.strip_prefix("general:").ok_or_else(bad)?;
                let (c, b) = params.split_once(',').ok_or_else(bad)?;
                let c: f64 = c.trim().parse().map_err(|_| bad())?;
                let b: f64 = b.trim().parse().map_err(|_| bad())?;
                // validates c > 1/2 and b ≥ 0
                StepSchedule::general(1.0, c, b).map_err(|e| Error::Config(e.to_string()))?;
                Ok(StepKind::General { c, b })
            }
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Classical => write!(f, "classical"),
            StepKind::Proposed => write!(f, "proposed"),
            StepKind::General { c, b } => write!(f, "general:{c},{b}"),
        }
    }
}

/// One step schedule paired with the schemes averaged along its iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    pub step: StepKind,
    /// Scheme names as accepted by [`AveragingScheme::parse`].
    pub schemes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub data: DataSource,
    pub lambda: Lambda,
    pub arms: Vec<Arm>,
    pub passes: u64,
    pub seeds: Vec<u64>,
    pub evaluations_per_pass: u64,
    pub sampling: SamplingStrategy,
    /// Project onto a ball of this radius; `None` leaves `K` the whole space.
    pub radius: Option<f64>,
    /// Worker threads; `None` uses the global pool. Output is identical
    /// either way.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// The default comparison: all six schemes with the classical step, plus
    /// `W` with the proposed step.
    pub fn default_arms() -> Vec<Arm> {
        let all = ["0", "1", "0.5", "D", "W", "W2"];
        vec![
            Arm {
                step: StepKind::Classical,
                schemes: all.iter().map(|s| s.to_string()).collect(),
            },
            Arm {
                step: StepKind::Proposed,
                schemes: vec!["W".into()],
            },
        ]
    }

    pub fn new(data: DataSource) -> Self {
        Self {
            data,
            lambda: Lambda::InverseN,
            arms: Self::default_arms(),
            passes: 50,
            seeds: vec![0],
            evaluations_per_pass: 1,
            sampling: SamplingStrategy::WithReplacement,
            radius: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.arms.is_empty() {
            return Err(Error::Config("at least one step schedule is required".into()));
        }
        for arm in &self.arms {
            if arm.schemes.is_empty() {
                return Err(Error::Config("at least one averaging scheme is required".into()));
            }
            let mut seen = std::collections::HashSet::new();
            for name in &arm.schemes {
                let canonical = AveragingScheme::parse(name, 1)?.to_string();
                if !seen.insert(canonical.clone()) {
                    return Err(Error::Config(format!(
                        "scheme `{canonical}` listed twice for {}",
                        arm.step
                    )));
                }
            }
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.passes == 0 {
            return Err(Error::Config("passes must be ≥ 1".into()));
        }
        if self.evaluations_per_pass == 0 {
            return Err(Error::Config("evaluations per pass must be ≥ 1".into()));
        }
        if let Some(r) = self.radius {
            ProjectionDomain::ball(r).map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be ≥ 1".into()));
        }
        Ok(())
    }

    fn domain(&self) -> ProjectionDomain {
        match self.radius {
            Some(radius) => ProjectionDomain::Ball { radius },
            None => ProjectionDomain::WholeSpace,
        }
    }
}

/// One CSV data row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub run_id: usize,
    pub scheme: String,
    pub schedule: String,
    pub seed: u64,
    pub t: u64,
    pub effective_passes: f64,
    pub objective: f64,
    pub iterate_norm: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub n: usize,
    pub dim: usize,
    pub lambda: f64,
    pub total_iterations: u64,
    pub rows: Vec<CsvRow>,
}

impl ExperimentOutput {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(CSV_HEADER)?;
        for r in &self.rows {
            csv.write_record([
                r.run_id.to_string(),
                r.scheme.clone(),
                r.schedule.clone(),
                r.seed.to_string(),
                r.t.to_string(),
                r.effective_passes.to_string(),
                r.objective.to_string(),
                r.iterate_norm.to_string(),
            ])?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn write_csv_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let file = File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Load the data and run every (arm, seed) pair.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let dataset = config.data.load()?;
    run_experiment_on(config, &dataset)
}

/// [`run_experiment`] on an already loaded (and preprocessed) dataset.
pub fn run_experiment_on(config: &ExperimentConfig, dataset: &Dataset) -> Result<ExperimentOutput> {
    config.validate()?;
    let n = dataset.len();
    let lambda = config.lambda.resolve(n);
    let total_iterations = config.passes * n as u64;
    let objective = SvmObjective::new(dataset, lambda)?;

    let mut jobs = Vec::new();
    for (arm_index, arm) in config.arms.iter().enumerate() {
        let schedule = arm.step.with_mu(lambda)?;
        let schemes = arm
            .schemes
            .iter()
            .map(|s| AveragingScheme::parse(s, total_iterations))
            .collect::<Result<Vec<_>>>()?;
        for (seed_index, &seed) in config.seeds.iter().enumerate() {
            let run_config = RunConfig {
                schedule,
                schemes: schemes.clone(),
                domain: config.domain(),
                total_iterations,
                seed,
                stream: arm_index as u64,
                evaluations_per_pass: config.evaluations_per_pass,
                n: n as u64,
            };
            jobs.push((arm_index, seed_index, run_config));
        }
    }

    // rows keyed by (arm, scheme, seed) position for the canonical sort
    type Keyed = Vec<(usize, usize, usize, CsvRow)>;
    let outcomes: Vec<Result<Keyed>> = in_pool(config.threads, || {
        jobs.par_iter()
            .enumerate()
            .map(|(run_id, (arm_index, seed_index, rc))| {
                let mut oracle = SvmOracle::new(dataset, lambda, config.sampling);
                let outcome = run(&mut oracle, &objective, rc, &WeightVector::zeros(dataset.dim()))
                    .map_err(|e| match e {
                        Error::Divergence { t } => Error::Config(format!(
                            "run {run_id} ({} seed {}) diverged at t={t}",
                            rc.schedule, rc.seed
                        )),
                        other => other,
                    })?;
                let scheme_order: Vec<String> = rc.schemes.iter().map(|s| s.to_string()).collect();
                Ok(outcome
                    .records
                    .into_iter()
                    .map(|r| {
                        let scheme_index = scheme_order
                            .iter()
                            .position(|s| *s == r.scheme_name)
                            .expect("record scheme comes from the run config");
                        let row = CsvRow {
                            run_id,
                            scheme: r.scheme_name,
                            schedule: r.schedule_name,
                            seed: r.seed,
                            t: r.t,
                            effective_passes: r.effective_passes,
                            objective: r.objective,
                            iterate_norm: r.iterate_norm,
                        };
                        (*arm_index, scheme_index, *seed_index, row)
                    })
                    .collect())
            })
            .collect()
    })?;

    let mut keyed = Vec::new();
    for outcome in outcomes {
        keyed.extend(outcome?);
    }
    keyed.sort_by_key(|(arm, scheme, seed, row)| (*arm, *scheme, *seed, row.t));

    Ok(ExperimentOutput {
        n,
        dim: dataset.dim(),
        lambda,
        total_iterations,
        rows: keyed.into_iter().map(|(_, _, _, row)| row).collect(),
    })
}

/// Reference estimate of the optimal objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct FStarEstimate {
    pub value: f64,
    pub method: String,
    /// Iterations per reference run.
    pub iterations: u64,
    /// Point at which `value` was observed.
    pub point: WeightVector,
}

impl FStarEstimate {
    pub fn write<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(["value", "method", "iterations"])?;
        csv.write_record([
            self.value.to_string(),
            self.method.clone(),
            self.iterations.to_string(),
        ])?;
        csv.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FStarConfig {
    /// Pass budget of the experiment the estimate serves.
    pub passes: u64,
    /// The reference runs use `multiplier × passes` passes (≥ 10).
    pub multiplier: u64,
    pub seed: u64,
    pub evaluations_per_pass: u64,
}

impl FStarConfig {
    pub fn new(passes: u64, multiplier: u64) -> Self {
        Self {
            passes,
            multiplier,
            seed: 0,
            evaluations_per_pass: 1,
        }
    }
}

#[derive(Default)]
struct BestPoint {
    value: f64,
    point: Option<WeightVector>,
}

impl RunObserver for BestPoint {
    fn on_evaluation(&mut self, _t: u64, _scheme: usize, point: &WeightVector, objective: f64) {
        if self.point.is_none() || objective < self.value {
            self.value = objective;
            self.point = Some(point.clone());
        }
    }
}

/// Minimum objective seen along `W`-averaged runs with the proposed step,
/// over [`FSTAR_SEEDS`] independent streams.
pub fn estimate_fstar_with<O, F, M>(
    mut make_oracle: M,
    objective: &F,
    w0: &WeightVector,
    mu: f64,
    n: u64,
    config: FStarConfig,
) -> Result<FStarEstimate>
where
    O: SubgradientOracle,
    F: Objective + ?Sized,
    M: FnMut() -> O,
{
    if config.multiplier < MIN_FSTAR_MULTIPLIER {
        return Err(Error::Config(format!(
            "f* budget multiplier must be ≥ {MIN_FSTAR_MULTIPLIER}, got {}",
            config.multiplier
        )));
    }
    if config.passes == 0 {
        return Err(Error::Config("passes must be ≥ 1".into()));
    }
    let iterations = config.passes * config.multiplier * n;
    let schedule = StepSchedule::proposed(mu)?;
    let mut best = BestPoint::default();
    for i in 0..FSTAR_SEEDS {
        let mut rc = RunConfig::new(schedule, vec![AveragingScheme::PolyWeight { k: 1 }], iterations, n);
        rc.seed = config.seed.wrapping_add(i);
        rc.stream = FSTAR_STREAM;
        rc.evaluations_per_pass = config.evaluations_per_pass;
        let mut oracle = make_oracle();
        run_observed(&mut oracle, objective, &rc, w0, &mut best)?;
    }
    Ok(FStarEstimate {
        value: best.value,
        method: format!("min-objective W/proposed x{FSTAR_SEEDS} seeds"),
        iterations,
        point: best.point.expect("every run evaluates at least once"),
    })
}

/// [`estimate_fstar_with`] for the SVM objective on `dataset`.
pub fn estimate_fstar(
    dataset: &Dataset,
    lambda: f64,
    sampling: SamplingStrategy,
    config: FStarConfig,
) -> Result<FStarEstimate> {
    let objective = SvmObjective::new(dataset, lambda)?;
    estimate_fstar_with(
        || SvmOracle::new(dataset, lambda, sampling),
        &objective,
        &WeightVector::zeros(dataset.dim()),
        lambda,
        dataset.len() as u64,
        config,
    )
}
