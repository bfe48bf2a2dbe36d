//! Labeled sparse datasets.

mod libsvm;
mod preprocess;
mod synthetic;

pub use libsvm::{parse_libsvm, read_libsvm, serialize_libsvm, write_libsvm};
pub use preprocess::{add_bias, density, preprocess, standardize, DENSE_THRESHOLD};
pub use synthetic::{synthesize, SyntheticSpec};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

/// One labeled instance with sparse features.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    features: Vec<(usize, f64)>,
    label: Label,
}

impl Sample {
    /// Features must have strictly increasing indices and finite values.
    pub fn new(features: Vec<(usize, f64)>, label: Label) -> Result<Self> {
        if features.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParameter(
                "feature indices must be strictly increasing".into(),
            ));
        }
        if features.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { features, label })
    }

    pub fn features(&self) -> &[(usize, f64)] {
        &self.features
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn y(&self) -> f64 {
        self.label.sign()
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.features.iter().map(|&(i, v)| w[i] * v).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.features.iter().map(|(_, v)| v * v).sum()
    }

    fn max_index(&self) -> Option<usize> {
        self.features.last().map(|&(i, _)| i)
    }
}

/// Preprocessing already applied to a [`Dataset`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DatasetFlags {
    pub standardized: bool,
    pub bias_added: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<Sample>,
    dim: usize,
    flags: DatasetFlags,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>, dim: usize) -> Result<Self> {
        Self::with_flags(samples, dim, DatasetFlags::default())
    }

    pub fn with_flags(samples: Vec<Sample>, dim: usize, flags: DatasetFlags) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dataset dimension must be positive".into()));
        }
        if let Some(max) = samples.iter().filter_map(Sample::max_index).max() {
            if max >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: max + 1,
                });
            }
        }
        Ok(Self {
            samples,
            dim,
            flags,
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flags(&self) -> DatasetFlags {
        self.flags
    }

    /// Largest feature norm over the samples.
    pub fn max_norm(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.norm_squared().sqrt())
            .fold(0.0, f64::max)
    }

    /// Empirical mean of `‖x‖²`.
    pub fn mean_norm_squared(&self) -> f64 {
        crate::vector::compensated_sum(self.samples.iter().map(Sample::norm_squared))
            / self.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_validation() {
        assert!(Sample::new(vec![(0, 1.0), (0, 2.0)], Label::Positive).is_err());
        assert!(Sample::new(vec![(3, 1.0), (1, 2.0)], Label::Positive).is_err());
        assert!(Sample::new(vec![(0, f64::NAN)], Label::Positive).is_err());
        assert!(Sample::new(vec![], Label::Negative).is_ok());
    }

    #[test]
    fn dataset_validation() {
        assert!(matches!(Dataset::new(vec![], 3), Err(Error::EmptyDataset)));
        let s = Sample::new(vec![(4, 1.0)], Label::Positive).unwrap();
        assert!(Dataset::new(vec![s.clone()], 4).is_err());
        assert!(Dataset::new(vec![s], 5).is_ok());
    }

    #[test]
    fn norms() {
        let a = Sample::new(vec![(0, 1.0)], Label::Positive).unwrap();
        let b = Sample::new(vec![(0, 1.0), (1, 2.0_f64.sqrt())], Label::Negative).unwrap();
        let d = Dataset::new(vec![a, b], 2).unwrap();
        assert!((d.mean_norm_squared() - 2.0).abs() < 1e-15);
        assert!((d.max_norm() - 3.0_f64.sqrt()).abs() < 1e-15);
    }
}
