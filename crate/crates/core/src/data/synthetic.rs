use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Dataset, Label, Sample};
use crate::error::{Error, Result};
use crate::vector::WeightVector;

/// Size and label noise of a synthetic linear classification problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub p: usize,
    pub noise: f64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidParameter("synthetic n and p must be ≥ 1".into()));
        }
        if !(0.0..0.5).contains(&self.noise) {
            return Err(Error::InvalidParameter(format!(
                "noise fraction must lie in [0, 0.5), got {}",
                self.noise
            )));
        }
        Ok(())
    }
}

/// Parses `n=<n>,p=<p>,noise=<f>`; `noise` defaults to 0.
impl FromStr for SyntheticSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Config(format!("bad synthetic spec `{s}`: {what}"));
        let (mut n, mut p, mut noise) = (None, None, 0.0);
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| bad(part))?;
            match key.trim() {
                "n" => n = Some(value.trim().parse().map_err(|_| bad(part))?),
                "p" => p = Some(value.trim().parse().map_err(|_| bad(part))?),
                "noise" => noise = value.trim().parse().map_err(|_| bad(part))?,
                _ => return Err(bad(part)),
            }
        }
        let spec = SyntheticSpec {
            n: n.ok_or_else(|| bad("missing n"))?,
            p: p.ok_or_else(|| bad("missing p"))?,
            noise,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SyntheticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},p={},noise={}", self.n, self.p, self.noise)
    }
}

/// Draw a unit direction `u`, Gaussian features and labels `sign(⟨u, x⟩)`,
/// each flipped independently with probability `spec.noise`.
///
/// Returns the dataset together with `u`.
pub fn synthesize(spec: SyntheticSpec, seed: u64) -> Result<(Dataset, WeightVector)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut u: Vec<f64> = (0..spec.p).map(|_| rng.sample(StandardNormal)).collect();
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    u.iter_mut().for_each(|v| *v /= norm);

    let samples = (0..spec.n)
        .map(|_| {
            let x: Vec<f64> = (0..spec.p).map(|_| rng.sample(StandardNormal)).collect();
            let margin: f64 = x.iter().zip(&u).map(|(a, b)| a * b).sum();
            let mut label = if margin >= 0.0 {
                Label::Positive
            } else {
                Label::Negative
            };
            if rng.random::<f64>() < spec.noise {
                label = label.flipped();
            }
            Sample {
                features: x.into_iter().enumerate().collect(),
                label,
            }
        })
        .collect();

    Ok((Dataset::new(samples, spec.p)?, WeightVector::new(u)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agreement(d: &Dataset, u: &WeightVector) -> Vec<bool> {
        d.samples()
            .iter()
            .map(|s| s.y() * s.dot(u.as_slice()) > 0.0)
            .collect()
    }

    #[test]
    fn noiseless_is_separable() {
        for seed in 0..5 {
            let spec = SyntheticSpec { n: 500, p: 7, noise: 0.0 };
            let (d, u) = synthesize(spec, seed).unwrap();
            assert!(agreement(&d, &u).into_iter().all(|ok| ok));
            assert!((u.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        let spec = SyntheticSpec { n: 100, p: 5, noise: 0.1 };
        assert_eq!(synthesize(spec, 9).unwrap(), synthesize(spec, 9).unwrap());
        assert_ne!(synthesize(spec, 9).unwrap().0, synthesize(spec, 10).unwrap().0);
    }

    #[test]
    fn flip_fraction_concentrates() {
        // binomial(10^4, 0.2) has std 0.004, so ±0.02 is a 5-sigma band
        let spec = SyntheticSpec { n: 10_000, p: 3, noise: 0.2 };
        let (d, u) = synthesize(spec, 3).unwrap();
        let flipped = agreement(&d, &u).iter().filter(|ok| !**ok).count() as f64 / 1e4;
        assert!((flipped - 0.2).abs() < 0.02, "{flipped}");
    }

    #[test]
    fn parse_spec() {
        let s: SyntheticSpec = "n=100,p=5,noise=0.1".parse().unwrap();
        assert_eq!(s, SyntheticSpec { n: 100, p: 5, noise: 0.1 });
        assert_eq!(s.to_string().parse::<SyntheticSpec>().unwrap(), s);
        let s: SyntheticSpec = "p=2, n=3".parse().unwrap();
        assert_eq!(s.noise, 0.0);
        for bad in ["n=1", "n=0,p=1", "n=1,p=1,noise=0.5", "n=1,p=1,q=2", "n=x,p=1"] {
            assert!(bad.parse::<SyntheticSpec>().is_err(), "{bad}");
        }
    }
}
