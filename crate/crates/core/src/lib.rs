//! Projected stochastic subgradient method with iterate averaging.
//!
//! The crate provides
//!
//! - step-size schedules for `μ`-strongly convex objectives ([`StepSchedule`]),
//! - online averaging schemes: last iterate, uniform, suffix, doubling,
//!   polynomial weights `(t+1)^k` and polynomial decay ([`AveragingScheme`]),
//! - the projected subgradient loop ([`solver::run`]),
//! - a hinge-loss SVM objective and stochastic oracle over sparse data
//!   ([`svm`], [`data`]),
//! - an experiment harness writing objective-vs-passes CSV files
//!   ([`experiment`]) and runtime checks of the rate argument ([`verify`]).
//!
//! ```
//! use wavg_core::{AveragingScheme, RunConfig, StepSchedule, WeightVector};
//! use wavg_core::solver::{run, Quadratic};
//!
//! let mu = 0.5;
//! let config = RunConfig::new(
//!     StepSchedule::proposed(mu).unwrap(),
//!     vec![AveragingScheme::PolyWeight { k: 1 }],
//!     100,
//!     1,
//! );
//! let w0 = WeightVector::new(vec![1.0, -1.0]).unwrap();
//! let out = run(&mut Quadratic { mu }, &Quadratic { mu }, &config, &w0).unwrap();
//! assert_eq!(out.records.len(), 100);
//! ```

pub mod averaging;
pub mod data;
pub mod error;
pub mod experiment;
pub mod projection;
pub mod schedule;
pub mod solver;
pub mod svm;
pub mod verify;
mod vector;

pub use averaging::{closed_form_average, update_average, AveragerState, AveragingScheme};
pub use data::{Dataset, DatasetFlags, Label, Sample, SyntheticSpec};
pub use error::{Error, LineErrorKind, Result};
pub use experiment::{
    estimate_fstar, run_experiment, Arm, DataSource, ExperimentConfig, ExperimentOutput,
    FStarConfig, FStarEstimate, Lambda, StepKind,
};
pub use projection::{project, ProjectionDomain};
pub use schedule::{step_size, StepSchedule};
pub use solver::{
    evaluation_times, random_stream, Objective, RandomStream, RunConfig, RunObserver, RunOutcome,
    RunRecord, SubgradientOracle,
};
pub use svm::{
    svm_objective, svm_stochastic_subgradient, variance_bound, variance_bound_ball,
    SamplingStrategy, SvmObjective, SvmOracle,
};
pub use vector::{compensated_sum, WeightVector};
