#![allow(dead_code)]

use wavg_core::{Dataset, Sample, WeightVector};

/// Hinge-loss SVM objective written out directly, without compensation.
pub fn objective(d: &Dataset, lambda: f64, w: &[f64]) -> f64 {
    let reg = 0.5 * lambda * w.iter().map(|x| x * x).sum::<f64>();
    let loss: f64 = d
        .samples()
        .iter()
        .map(|s| (1.0 - s.y() * margin(s, w)).max(0.0))
        .sum();
    reg + loss / d.len() as f64
}

pub fn margin(s: &Sample, w: &[f64]) -> f64 {
    s.features().iter().map(|&(j, v)| w[j] * v).sum()
}

/// `λw - y x` if the margin is below one, else `λw`.
pub fn subgradient(s: &Sample, lambda: f64, w: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = w.iter().map(|x| lambda * x).collect();
    if s.y() * margin(s, w) < 1.0 {
        for &(j, v) in s.features() {
            g[j] -= s.y() * v;
        }
    }
    g
}

/// Exact SVM optimum by dual coordinate descent. Returns the primal value,
/// the dual value and the primal point.
pub fn dual_optimum(d: &Dataset, lambda: f64) -> (f64, f64, WeightVector) {
    let n = d.len();
    let c = 1.0 / (lambda * n as f64);
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; d.dim()];
    let q: Vec<f64> = d.samples().iter().map(|s| s.norm_squared()).collect();
    for _ in 0..50_000 {
        let mut worst: f64 = 0.0;
        for (i, s) in d.samples().iter().enumerate() {
            let g = s.y() * margin(s, &w) - 1.0;
            let pg = if alpha[i] == 0.0 {
                g.min(0.0)
            } else if alpha[i] == c {
                g.max(0.0)
            } else {
                g
            };
            worst = worst.max(pg.abs());
            if pg != 0.0 && q[i] > 0.0 {
                let next = (alpha[i] - g / q[i]).clamp(0.0, c);
                let delta = (next - alpha[i]) * s.y();
                for &(j, v) in s.features() {
                    w[j] += delta * v;
                }
                alpha[i] = next;
            }
        }
        if worst < 1e-13 {
            break;
        }
    }
    let primal = objective(d, lambda, &w);
    let dual = lambda * (alpha.iter().sum::<f64>() - 0.5 * w.iter().map(|x| x * x).sum::<f64>());
    (primal, dual, WeightVector::new(w).expect("finite"))
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}
