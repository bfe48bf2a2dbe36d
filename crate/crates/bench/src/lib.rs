//! Fixtures shared by the benchmarks.

use wavg_core::{DataSource, Dataset, SyntheticSpec, WeightVector};

/// Preprocessed synthetic problem with 10% label noise.
pub fn synthetic(n: usize, p: usize) -> Dataset {
    DataSource::Synthetic {
        spec: SyntheticSpec { n, p, noise: 0.1 },
        seed: 7,
    }
    .load()
    .expect("valid synthetic spec")
}

/// `count` iterates of dimension `dim` drifting towards the origin.
pub fn iterates(count: usize, dim: usize) -> Vec<WeightVector> {
    (0..count)
        .map(|t| {
            let scale = 1.0 / (t as f64 + 1.0);
            WeightVector::new((0..dim).map(|j| scale * (j as f64 - 0.5 * dim as f64)).collect())
                .expect("finite")
        })
        .collect()
}

/// Sparse LIBSVM text: `n` lines, about `per_line` features out of `dim`.
pub fn libsvm_text(n: usize, dim: usize, per_line: usize) -> String {
    let mut out = String::new();
    for i in 0..n {
        out.push_str(if i % 3 == 0 { "-1" } else { "+1" });
        let stride = (dim / per_line).max(1);
        let mut j = 1 + i % stride;
        while j <= dim {
            out.push_str(&format!(" {j}:{}", (i * 31 + j) as f64 / 97.0));
            j += stride;
        }
        out.push('\n');
    }
    out
}
