//! Dense iterate storage.

use std::ops::Index;

use crate::error::{Error, Result};

/// Dense real vector holding an iterate or an average of iterates.
///
/// Entries are always finite and the dimension is fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    entries: Vec<f64>,
}

impl WeightVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "weight vector dimension must be positive".into(),
            ));
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    /// Zero vector of dimension `dim` (panics if `dim == 0`).
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "weight vector dimension must be positive");
        Self {
            entries: vec![0.0; dim],
        }
    }

    /// Caller guarantees every entry is finite and the vector is non-empty.
    pub(crate) fn from_finite(entries: Vec<f64>) -> Self {
        debug_assert!(!entries.is_empty() && entries.iter().all(|v| v.is_finite()));
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.entries, other)
    }

    pub fn norm_squared(&self) -> f64 {
        dot(&self.entries, &self.entries)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance_squared(&self, other: &WeightVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// `(1 - rho) * self + rho * other`, in place.
    pub(crate) fn blend(&mut self, other: &WeightVector, rho: f64) {
        if rho == 1.0 {
            self.entries.copy_from_slice(&other.entries);
            return;
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a = (1.0 - rho) * *a + rho * b;
        }
    }
}

impl Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

impl AsRef<[f64]> for WeightVector {
    fn as_ref(&self) -> &[f64] {
        &self.entries
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}
