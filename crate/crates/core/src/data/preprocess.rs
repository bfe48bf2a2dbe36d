use super::{Dataset, DatasetFlags, Sample};
use crate::error::{Error, Result};
use crate::vector::compensated_sum;

/// Datasets denser than this are standardized by [`preprocess`].
pub const DENSE_THRESHOLD: f64 = 0.5;

/// Fraction of stored nonzeros, `nnz / (n p)`.
pub fn density(dataset: &Dataset) -> f64 {
    let nnz = dataset
        .samples()
        .iter()
        .flat_map(|s| s.features())
        .filter(|(_, v)| *v != 0.0)
        .count();
    nnz as f64 / (dataset.len() as f64 * dataset.dim() as f64)
}

/// Dense copy of the feature matrix, one row per sample.
fn dense_rows(dataset: &Dataset) -> Vec<Vec<f64>> {
    dataset
        .samples()
        .iter()
        .map(|s| {
            let mut row = vec![0.0; dataset.dim()];
            for &(i, v) in s.features() {
                row[i] = v;
            }
            row
        })
        .collect()
}

/// Map every feature to zero mean and unit population variance. Constant
/// features become identically zero. The result stores every coordinate.
pub fn standardize(dataset: &Dataset) -> Result<Dataset> {
    let mut flags = dataset.flags();
    if flags.standardized {
        return Err(Error::AlreadyStandardized);
    }
    let n = dataset.len() as f64;
    let mut rows = dense_rows(dataset);

    for j in 0..dataset.dim() {
        let first = rows[0][j];
        if rows.iter().all(|r| r[j] == first) {
            rows.iter_mut().for_each(|r| r[j] = 0.0);
            continue;
        }
        let mean = compensated_sum(rows.iter().map(|r| r[j])) / n;
        let var = compensated_sum(rows.iter().map(|r| (r[j] - mean).powi(2))) / n;
        let std = var.sqrt();
        rows.iter_mut().for_each(|r| r[j] = (r[j] - mean) / std);
    }

    let samples = rows
        .into_iter()
        .zip(dataset.samples())
        .map(|(row, s)| Sample {
            features: row.into_iter().enumerate().collect(),
            label: s.label(),
        })
        .collect();
    flags.standardized = true;
    Dataset::with_flags(samples, dataset.dim(), flags)
}

/// Append a constant feature `1.0` at index `p`.
pub fn add_bias(dataset: &Dataset) -> Result<Dataset> {
    let mut flags = dataset.flags();
    if flags.bias_added {
        return Err(Error::BiasAlreadyAdded);
    }
    let p = dataset.dim();
    let samples = dataset
        .samples()
        .iter()
        .map(|s| {
            let mut features = s.features().to_vec();
            features.push((p, 1.0));
            Sample {
                features,
                label: s.label(),
            }
        })
        .collect();
    flags.bias_added = true;
    Dataset::with_flags(samples, p + 1, flags)
}

/// Standardize dense data, then append the bias.
pub fn preprocess(dataset: &Dataset) -> Result<Dataset> {
    let flags: DatasetFlags = dataset.flags();
    let standardized = if !flags.standardized && density(dataset) > DENSE_THRESHOLD {
        standardize(dataset)?
    } else {
        dataset.clone()
    };
    if standardized.flags().bias_added {
        Ok(standardized)
    } else {
        add_bias(&standardized)
    }
}
