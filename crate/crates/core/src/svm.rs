//! Hinge-loss SVM:
//!
//! ```text
//! f(w) = (λ/2)‖w‖² + (1/n) Σ_i max{0, 1 - y_i ⟨w, x_i⟩}
//! ```
//!
//! The stochastic oracle picks one sample per call. With `λ` as the strong
//! convexity constant and the hinge being 1-Lipschitz, its second moment is
//! bounded by `4 E‖x‖²` as long as `w_0 = 0` and `λ γ_t ≤ 1`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::{Dataset, Sample};
use crate::error::{Error, Result};
use crate::solver::{Objective, RandomStream, SubgradientOracle};
use crate::vector::{compensated_sum, WeightVector};

/// Lipschitz constant of the hinge loss in its scalar argument.
pub const HINGE_LIPSCHITZ: f64 = 1.0;

#[derive(Debug, Clone, Copy)]
pub struct SvmObjective<'a> {
    dataset: &'a Dataset,
    lambda: f64,
}

impl<'a> SvmObjective<'a> {
    pub fn new(dataset: &'a Dataset, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "regularization must be non-negative, got {lambda}"
            )));
        }
        Ok(Self { dataset, lambda })
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Full-batch objective value.
    pub fn evaluate(&self, w: &WeightVector) -> Result<f64> {
        w.check_dim(self.dataset.dim())?;
        Ok(self.value_unchecked(w))
    }

    fn value_unchecked(&self, w: &WeightVector) -> f64 {
        let x = w.as_slice();
        let hinge = compensated_sum(
            self.dataset
                .samples()
                .iter()
                .map(|s| (1.0 - s.y() * s.dot(x)).max(0.0)),
        );
        0.5 * self.lambda * w.norm_squared() + hinge / self.dataset.len() as f64
    }

    /// Mean of the per-sample subgradients (same tie-break as the oracle).
    pub fn full_subgradient(&self, w: &WeightVector) -> Result<WeightVector> {
        w.check_dim(self.dataset.dim())?;
        let n = self.dataset.len() as f64;
        let mut hinge = vec![Vec::new(); w.dim()];
        for s in self.dataset.samples() {
            if s.y() * s.dot(w.as_slice()) < 1.0 {
                for &(i, v) in s.features() {
                    hinge[i].push(-s.y() * v);
                }
            }
        }
        let g = w
            .as_slice()
            .iter()
            .zip(hinge)
            .map(|(wi, terms)| self.lambda * wi + compensated_sum(terms) / n)
            .collect();
        WeightVector::new(g)
    }
}

impl Objective for SvmObjective<'_> {
    /// Panics if `w` does not match the dataset dimension.
    fn value(&self, w: &WeightVector) -> f64 {
        assert_eq!(w.dim(), self.dataset.dim(), "dimension mismatch");
        self.value_unchecked(w)
    }
}

pub fn svm_objective(w: &WeightVector, objective: &SvmObjective<'_>) -> Result<f64> {
    objective.evaluate(w)
}

/// Subgradient of `(λ/2)‖w‖² + max{0, 1 - y⟨w, x⟩}` at `w`. At margin
/// exactly 1 the hinge contributes 0.
pub fn svm_stochastic_subgradient(w: &WeightVector, sample: &Sample, lambda: f64) -> Result<WeightVector> {
    if let Some(&(i, _)) = sample.features().last() {
        if i >= w.dim() {
            return Err(Error::DimensionMismatch {
                expected: w.dim(),
                got: i + 1,
            });
        }
    }
    let mut g = Vec::with_capacity(w.dim());
    stochastic_subgradient_into(w.as_slice(), sample, lambda, &mut g);
    WeightVector::new(g)
}

fn stochastic_subgradient_into(w: &[f64], sample: &Sample, lambda: f64, out: &mut Vec<f64>) {
    out.clear();
    out.extend(w.iter().map(|x| lambda * x));
    let y = sample.y();
    if y * sample.dot(w) < 1.0 {
        for &(i, v) in sample.features() {
            out[i] -= y * v;
        }
    }
}

/// `B² = 4 L² E‖x‖²` with the empirical mean over the dataset.
pub fn variance_bound(dataset: &Dataset, _lambda: f64) -> f64 {
    4.0 * HINGE_LIPSCHITZ * HINGE_LIPSCHITZ * dataset.mean_norm_squared()
}

/// `B² = (L √E‖x‖² + λ R)²` for iterates confined to a ball of radius `R`.
pub fn variance_bound_ball(dataset: &Dataset, lambda: f64, radius: f64) -> f64 {
    (HINGE_LIPSCHITZ * dataset.mean_norm_squared().sqrt() + lambda * radius).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingStrategy {
    /// Independent uniform draws.
    #[default]
    WithReplacement,
    /// A fresh uniform permutation for every pass.
    PermutedPasses,
}

/// Sample index generator for a dataset of size `n`.
#[derive(Debug, Clone)]
pub struct IndexSampler {
    n: usize,
    strategy: SamplingStrategy,
    order: Vec<usize>,
    position: usize,
}

impl IndexSampler {
    pub fn new(n: usize, strategy: SamplingStrategy) -> Self {
        assert!(n > 0, "cannot sample from an empty dataset");
        Self {
            n,
            strategy,
            order: Vec::new(),
            position: 0,
        }
    }

    pub fn next_index(&mut self, rng: &mut RandomStream) -> usize {
        match self.strategy {
            SamplingStrategy::WithReplacement => rng.random_range(0..self.n),
            SamplingStrategy::PermutedPasses => {
                if self.position == self.order.len() {
                    self.order = (0..self.n).collect();
                    self.order.shuffle(rng);
                    self.position = 0;
                }
                self.position += 1;
                self.order[self.position - 1]
            }
        }
    }
}

/// Single-draw form of [`IndexSampler`]; only meaningful for
/// [`SamplingStrategy::WithReplacement`], since a permutation needs state.
pub fn sample_index(rng: &mut RandomStream, n: usize) -> usize {
    IndexSampler::new(n, SamplingStrategy::WithReplacement).next_index(rng)
}

/// Stochastic subgradient oracle drawing one sample per call.
#[derive(Debug, Clone)]
pub struct SvmOracle<'a> {
    dataset: &'a Dataset,
    lambda: f64,
    sampler: IndexSampler,
}

impl<'a> SvmOracle<'a> {
    pub fn new(dataset: &'a Dataset, lambda: f64, strategy: SamplingStrategy) -> Self {
        Self {
            dataset,
            lambda,
            sampler: IndexSampler::new(dataset.len(), strategy),
        }
    }
}

impl SubgradientOracle for SvmOracle<'_> {
    fn subgradient(&mut self, w: &WeightVector, rng: &mut RandomStream) -> Vec<f64> {
        let i = self.sampler.next_index(rng);
        let mut g = Vec::with_capacity(w.dim());
        stochastic_subgradient_into(w.as_slice(), &self.dataset.samples()[i], self.lambda, &mut g);
        g
    }
}
