use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use wavg_core::experiment::{estimate_fstar, run_experiment_on};
use wavg_core::verify::{verify_suite, VerifyConfig};
use wavg_core::{
    variance_bound, variance_bound_ball, Arm, DataSource, ExperimentConfig, FStarConfig, Lambda,
    SamplingStrategy, StepKind, SyntheticSpec,
};

/// Stochastic subgradient experiments with iterate averaging on a hinge-loss SVM.
#[derive(Parser)]
#[command(name = "bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scheme × schedule × seed grid and write a CSV of objectives.
    Run(RunArgs),
    /// Run the runtime checks on a synthetic problem.
    Verify(VerifyArgs),
    /// Estimate the optimal objective with a long reference run.
    Fstar(FstarArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// LIBSVM-format training file.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Synthetic problem, e.g. `n=1000,p=20,noise=0.1`.
    #[arg(long)]
    synthetic: Option<SyntheticSpec>,
}

#[derive(Args)]
struct Problem {
    #[command(flatten)]
    source: Source,
    /// Seed of the synthetic generator.
    #[arg(long, default_value_t = 0)]
    data_seed: u64,
    /// Regularization strength, a positive number or `1/n`.
    #[arg(long, default_value = "1/n")]
    lambda: Lambda,
    #[arg(long, value_enum, default_value_t = Sampling::Uniform)]
    sampling: Sampling,
}

impl Problem {
    fn data_source(&self) -> DataSource {
        match (&self.source.data, self.source.synthetic) {
            (Some(path), _) => DataSource::Libsvm(path.clone()),
            (None, Some(spec)) => DataSource::Synthetic {
                spec,
                seed: self.data_seed,
            },
            (None, None) => unreachable!("clap enforces one data source"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Sampling {
    /// Independent uniform draws with replacement.
    Uniform,
    /// A fresh random permutation every pass.
    Permuted,
}

impl From<Sampling> for SamplingStrategy {
    fn from(s: Sampling) -> Self {
        match s {
            Sampling::Uniform => SamplingStrategy::WithReplacement,
            Sampling::Permuted => SamplingStrategy::PermutedPasses,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: Problem,
    /// Averaging schemes: 0, 1, 0.5, D, W, W2, poly:<k>, decay:<eta>.
    #[arg(long, value_delimiter = ',')]
    schemes: Vec<String>,
    /// Step schedule: classical, proposed or general:<c>,<b>. Repeatable.
    /// Without --step and --schemes the default grid is all six schemes with
    /// the classical step plus W with the proposed step.
    #[arg(long = "step")]
    steps: Vec<StepKind>,
    #[arg(long, default_value_t = 50)]
    passes: u64,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    evals_per_pass: u64,
    /// Project iterates onto the ball of this radius.
    #[arg(long)]
    radius: Option<f64>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Synthetic problem to check on.
    #[arg(long, default_value = "n=1000,p=20,noise=0.1")]
    synthetic: SyntheticSpec,
    #[arg(long, default_value_t = 0)]
    data_seed: u64,
    #[arg(long, default_value_t = 20)]
    passes: u64,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8,9")]
    seeds: Vec<u64>,
    /// Ratio of the f* reference budget to the checked budget.
    #[arg(long, default_value_t = 10)]
    multiplier: u64,
    /// Random sequences per algebraic check.
    #[arg(long, default_value_t = 200)]
    sequences: usize,
}

#[derive(Args)]
struct FstarArgs {
    #[command(flatten)]
    problem: Problem,
    /// Pass budget of the experiment the estimate is for.
    #[arg(long, default_value_t = 50)]
    passes: u64,
    #[arg(long, default_value_t = 10)]
    multiplier: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    evals_per_pass: u64,
    #[arg(long)]
    out: PathBuf,
}

fn arms(schemes: Vec<String>, steps: Vec<StepKind>) -> Vec<Arm> {
    if schemes.is_empty() && steps.is_empty() {
        return ExperimentConfig::default_arms();
    }
    let schemes = if schemes.is_empty() {
        ["0", "1", "0.5", "D", "W", "W2"].map(String::from).to_vec()
    } else {
        schemes
    };
    let steps = if steps.is_empty() { vec![StepKind::Classical] } else { steps };
    steps
        .into_iter()
        .map(|step| Arm {
            step,
            schemes: schemes.clone(),
        })
        .collect()
}

fn run(args: RunArgs) -> Result<()> {
    let mut config = ExperimentConfig::new(args.problem.data_source());
    config.lambda = args.problem.lambda;
    config.sampling = args.problem.sampling.into();
    config.arms = arms(args.schemes, args.steps);
    config.passes = args.passes;
    config.seeds = args.seeds;
    config.evaluations_per_pass = args.evals_per_pass;
    config.radius = args.radius;
    config.threads = args.threads;
    config.validate()?;

    let dataset = config.data.load().context("loading data")?;
    let output = run_experiment_on(&config, &dataset)?;
    if let Some(radius) = args.radius {
        eprintln!(
            "B² = {} (whole space), {} (ball of radius {radius})",
            variance_bound(&dataset, output.lambda),
            variance_bound_ball(&dataset, output.lambda, radius)
        );
    }
    let file = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    output.write_csv(BufWriter::new(file))?;
    eprintln!(
        "n = {}, dim = {}, λ = {}, T = {}: {} rows written to {}",
        output.n,
        output.dim,
        output.lambda,
        output.total_iterations,
        output.rows.len(),
        args.out.display()
    );
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let config = VerifyConfig {
        synthetic: args.synthetic,
        data_seed: args.data_seed,
        passes: args.passes,
        seeds: args.seeds,
        fstar_multiplier: args.multiplier,
        sequences: args.sequences,
        ..VerifyConfig::default()
    };
    if config.seeds.is_empty() {
        bail!("at least one seed is required");
    }
    let report = verify_suite(&config)?;
    print!("{report}");
    Ok(report.all_passed())
}

fn fstar(args: FstarArgs) -> Result<()> {
    let dataset = args.problem.data_source().load().context("loading data")?;
    let lambda = args.problem.lambda.resolve(dataset.len());
    let mut config = FStarConfig::new(args.passes, args.multiplier);
    config.seed = args.seed;
    config.evaluations_per_pass = args.evals_per_pass;
    let estimate = estimate_fstar(&dataset, lambda, args.problem.sampling.into(), config)?;
    let file = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    estimate.write(BufWriter::new(file))?;
    println!("{}", estimate.value);
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Run(args) => run(args).map(|()| true),
        Command::Verify(args) => verify(args),
        Command::Fstar(args) => fstar(args).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
