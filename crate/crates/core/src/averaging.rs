//! Iterate averaging.
//!
//! Every scheme is an online recurrence over the iterate stream
//! `w_0, w_1, w_2, ...` (indexed from the initial point):
//!
//! ```text
//! avg_t = (1 - rho_t) * avg_{t-1} + rho_t * w_t
//! ```
//!
//! The schemes differ only in `rho_t`. [`closed_form_average`] computes the
//! same reported point directly from the whole sequence and is used to test
//! the recurrences.

use std::fmt;

use crate::error::{Error, Result};
use crate::vector::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AveragingScheme {
    /// Report the last iterate (`0`).
    NoAveraging,
    /// Uniform average of all iterates (`1`).
    UniformAll,
    /// Uniform average over iterates `t > horizon / 2` (`0.5`). Until that
    /// window opens the raw iterate is reported.
    SuffixHalf { horizon: u64 },
    /// Uniform average restarted at every iterate whose index is a power of
    /// two (`D`).
    Doubling,
    /// Iterate `t` weighted by `(t + 1)^k` (`W` for k = 1, `W2` for k = 2).
    PolyWeight { k: u32 },
    /// `rho_t = (1 + eta) / (t + 1 + eta)`.
    PolyDecay { eta: u32 },
}

impl AveragingScheme {
    /// Parse a scheme name: `0`, `1`, `0.5`, `D`, `W`, `W2`, `poly:<k>` or
    /// `decay:<eta>`. `horizon` is only used by `0.5`.
    pub fn parse(name: &str, horizon: u64) -> Result<Self> {
        let bad = || Error::Config(format!("unknown averaging scheme `{name}`"));
        let scheme = match name {
            "0" => AveragingScheme::NoAveraging,
            "1" => AveragingScheme::UniformAll,
            "0.5" => AveragingScheme::suffix_half(horizon)?,
            "D" => AveragingScheme::Doubling,
            "W" => AveragingScheme::PolyWeight { k: 1 },
            "W2" => AveragingScheme::PolyWeight { k: 2 },
            _ => {
                if let Some(k) = name.strip_prefix("poly:") {
                    let k: u32 = k.parse().map_err(|_| bad())?;
                    if k == 0 {
                        return Err(Error::Config("poly:<k> requires k ≥ 1".into()));
                    }
                    AveragingScheme::PolyWeight { k }
                } else if let Some(eta) = name.strip_prefix("decay:") {
                    AveragingScheme::PolyDecay {
                        eta: eta.parse().map_err(|_| bad())?,
                    }
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(scheme)
    }

    pub fn suffix_half(horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidParameter(
                "suffix averaging needs a horizon ≥ 1".into(),
            ));
        }
        Ok(AveragingScheme::SuffixHalf { horizon })
    }

    /// All six schemes compared in the experiments, in plotting order.
    pub fn standard_set(horizon: u64) -> Vec<AveragingScheme> {
        vec![
            AveragingScheme::NoAveraging,
            AveragingScheme::UniformAll,
            AveragingScheme::SuffixHalf {
                horizon: horizon.max(1),
            },
            AveragingScheme::Doubling,
            AveragingScheme::PolyWeight { k: 1 },
            AveragingScheme::PolyWeight { k: 2 },
        ]
    }

    /// Unnormalized weight `(t + 1)^k` of a polynomial scheme.
    fn poly_weight(k: u32, t: u64) -> f64 {
        ((t + 1) as f64).powi(k as i32)
    }
}

/// First iterate of the suffix window.
fn suffix_start(horizon: u64) -> u64 {
    horizon / 2 + 1
}

impl fmt::Display for AveragingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AveragingScheme::NoAveraging => write!(f, "0"),
            AveragingScheme::UniformAll => write!(f, "1"),
            AveragingScheme::SuffixHalf { .. } => write!(f, "0.5"),
            AveragingScheme::Doubling => write!(f, "D"),
            AveragingScheme::PolyWeight { k: 1 } => write!(f, "W"),
            AveragingScheme::PolyWeight { k: 2 } => write!(f, "W2"),
            AveragingScheme::PolyWeight { k } => write!(f, "poly:{k}"),
            AveragingScheme::PolyDecay { eta } => write!(f, "decay:{eta}"),
        }
    }
}

/// Running state of one averaging scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragerState {
    scheme: AveragingScheme,
    average: WeightVector,
    cumulative_weight: f64,
    next_index: u64,
    window_start: u64,
}

impl AveragerState {
    pub fn new(scheme: AveragingScheme, dim: usize) -> Self {
        Self {
            scheme,
            average: WeightVector::zeros(dim),
            cumulative_weight: 0.0,
            next_index: 0,
            window_start: 0,
        }
    }

    pub fn scheme(&self) -> AveragingScheme {
        self.scheme
    }

    /// The reported point. Zero until the first iterate is absorbed.
    pub fn current_average(&self) -> &WeightVector {
        &self.average
    }

    /// Sum of the (unnormalized) weights absorbed since the last reset.
    pub fn cumulative_weight(&self) -> f64 {
        self.cumulative_weight
    }

    /// Index the next call to [`absorb`](Self::absorb) expects.
    pub fn iterate_index(&self) -> u64 {
        self.next_index
    }

    /// Start of the current uniform window (suffix and doubling schemes).
    pub fn epoch_start(&self) -> u64 {
        self.window_start
    }

    /// Window start in effect once iterate `t` is absorbed.
    fn window_start_for(&self, t: u64) -> u64 {
        match self.scheme {
            AveragingScheme::Doubling => {
                if t == 0 || t.is_power_of_two() {
                    t
                } else {
                    self.window_start
                }
            }
            AveragingScheme::SuffixHalf { horizon } => t.min(suffix_start(horizon)),
            _ => 0,
        }
    }

    /// Mixing coefficient applied to iterate `t`, given the state before it
    /// is absorbed.
    pub fn rho(&self, t: u64) -> f64 {
        match self.scheme {
            AveragingScheme::NoAveraging => 1.0,
            AveragingScheme::UniformAll => 1.0 / (t as f64 + 1.0),
            AveragingScheme::PolyWeight { k: 1 } => 2.0 / (t as f64 + 2.0),
            AveragingScheme::PolyWeight { k } => {
                let w = AveragingScheme::poly_weight(k, t);
                if t == 0 {
                    1.0
                } else {
                    w / (self.cumulative_weight + w)
                }
            }
            AveragingScheme::PolyDecay { eta } => {
                let eta = eta as f64;
                (1.0 + eta) / (t as f64 + 1.0 + eta)
            }
            AveragingScheme::SuffixHalf { .. } | AveragingScheme::Doubling => {
                let start = self.window_start_for(t);
                1.0 / ((t - start) as f64 + 1.0)
            }
        }
    }

    /// Absorb iterate `w_t`. `t` must equal [`iterate_index`](Self::iterate_index).
    pub fn absorb(&mut self, w: &WeightVector, t: u64) -> Result<()> {
        if t != self.next_index {
            return Err(Error::IndexMismatch {
                expected: self.next_index,
                got: t,
            });
        }
        w.check_dim(self.average.dim())?;

        let rho = self.rho(t);
        self.average.blend(w, rho);

        self.cumulative_weight = match self.scheme {
            AveragingScheme::NoAveraging => 1.0,
            AveragingScheme::UniformAll => self.cumulative_weight + 1.0,
            AveragingScheme::PolyWeight { k } => {
                self.cumulative_weight + AveragingScheme::poly_weight(k, t)
            }
            // Unrolled recurrence: C_0 = 1, C_t = C_{t-1} (t + 1 + eta) / t.
            AveragingScheme::PolyDecay { eta } => {
                if t == 0 {
                    1.0
                } else {
                    self.cumulative_weight * (t as f64 + 1.0 + eta as f64) / t as f64
                }
            }
            AveragingScheme::SuffixHalf { .. } | AveragingScheme::Doubling => {
                let start = self.window_start_for(t);
                self.window_start = start;
                (t - start + 1) as f64
            }
        };
        self.next_index += 1;
        Ok(())
    }
}

/// Functional form of [`AveragerState::absorb`].
pub fn update_average(mut state: AveragerState, w: &WeightVector, t: u64) -> Result<AveragerState> {
    state.absorb(w, t)?;
    Ok(state)
}

/// Reported point of `scheme` after absorbing `iterates` (indexed from 0),
/// computed directly as a weighted sum.
pub fn closed_form_average(
    iterates: &[WeightVector],
    scheme: AveragingScheme,
) -> Result<WeightVector> {
    let last = match iterates.len() {
        0 => return Err(Error::EmptySequence),
        len => (len - 1) as u64,
    };
    let dim = iterates[0].dim();
    for w in iterates {
        w.check_dim(dim)?;
    }

    let weights: Vec<f64> = match scheme {
        AveragingScheme::NoAveraging => indicator(last, last),
        AveragingScheme::UniformAll => vec![1.0; iterates.len()],
        AveragingScheme::PolyWeight { k } => (0..=last)
            .map(|t| AveragingScheme::poly_weight(k, t))
            .collect(),
        AveragingScheme::PolyDecay { eta } => {
            // Weight of w_s is rho_s * prod_{r > s} (1 - rho_r).
            let eta = eta as f64;
            let rho = |t: u64| (1.0 + eta) / (t as f64 + 1.0 + eta);
            let mut weights = vec![0.0; iterates.len()];
            let mut tail = 1.0;
            for s in (0..=last).rev() {
                weights[s as usize] = rho(s) * tail;
                tail *= 1.0 - rho(s);
            }
            weights
        }
        AveragingScheme::Doubling => {
            let start = if last == 0 {
                0
            } else {
                1u64 << (63 - last.leading_zeros())
            };
            indicator(start, last)
        }
        AveragingScheme::SuffixHalf { horizon } => {
            let start = suffix_start(horizon);
            if last < start {
                indicator(last, last)
            } else {
                indicator(start, last)
            }
        }
    };

    let total: f64 = weights.iter().sum();
    let mut out = vec![0.0; dim];
    for (w, &weight) in iterates.iter().zip(&weights) {
        if weight == 0.0 {
            continue;
        }
        for (o, x) in out.iter_mut().zip(w.as_slice()) {
            *o += weight * x;
        }
    }
    out.iter_mut().for_each(|o| *o /= total);
    WeightVector::new(out)
}

/// Weights equal to 1 on `start..=last`, 0 before.
fn indicator(start: u64, last: u64) -> Vec<f64> {
    (0..=last).map(|t| if t >= start { 1.0 } else { 0.0 }).collect()
}
