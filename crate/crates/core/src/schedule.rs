//! Step-size rules `t ↦ γ_t` for a `μ`-strongly convex objective.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `γ_t = 1 / (μ t)`
    Classical { mu: f64 },
    /// `γ_t = 2 / (μ (t + 1))`
    Proposed { mu: f64 },
    /// `γ_t = c / (μ (t + b))`, with `c > 1/2` and `b ≥ 0`.
    General { mu: f64, c: f64, b: f64 },
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "strong convexity constant must be positive, got {mu}"
        )))
    }
}

impl StepSchedule {
    pub fn classical(mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(StepSchedule::Classical { mu })
    }

    pub fn proposed(mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(StepSchedule::Proposed { mu })
    }

    pub fn general(mu: f64, c: f64, b: f64) -> Result<Self> {
        check_mu(mu)?;
        if !(c.is_finite() && c > 0.5) {
            return Err(Error::InvalidParameter(format!("c must exceed 1/2, got {c}")));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidParameter(format!("b must be non-negative, got {b}")));
        }
        Ok(StepSchedule::General { mu, c, b })
    }

    pub fn mu(&self) -> f64 {
        match *self {
            StepSchedule::Classical { mu }
            | StepSchedule::Proposed { mu }
            | StepSchedule::General { mu, .. } => mu,
        }
    }

    pub fn step_size(&self, t: u64) -> Result<f64> {
        if t == 0 {
            return Err(Error::ZeroStep);
        }
        let t = t as f64;
        Ok(match *self {
            StepSchedule::Classical { mu } => 1.0 / (mu * t),
            StepSchedule::Proposed { mu } => 2.0 / (mu * (t + 1.0)),
            StepSchedule::General { mu, c, b } => c / (mu * (t + b)),
        })
    }
}

/// Free-function form of [`StepSchedule::step_size`].
pub fn step_size(schedule: &StepSchedule, t: u64) -> Result<f64> {
    schedule.step_size(t)
}

/// Schedule name as used in CSV output and on the command line.
impl fmt::Display for StepSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepSchedule::Classical { .. } => write!(f, "classical"),
            StepSchedule::Proposed { .. } => write!(f, "proposed"),
            StepSchedule::General { c, b, .. } => write!(f, "general:{c},{b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(StepSchedule::classical(0.5).unwrap().step_size(4).unwrap(), 0.5);
        assert_eq!(StepSchedule::proposed(2.0).unwrap().step_size(3).unwrap(), 0.25);
        let general = StepSchedule::general(1.0, 1.0, 0.0).unwrap();
        let classical = StepSchedule::classical(1.0).unwrap();
        assert_eq!(general.step_size(7).unwrap(), 1.0 / 7.0);
        assert_eq!(general.step_size(7).unwrap(), classical.step_size(7).unwrap());
    }

    #[test]
    fn t_zero_is_an_error() {
        let err = StepSchedule::classical(1.0).unwrap().step_size(0).unwrap_err();
        assert_eq!(err.to_string(), "schedules are defined for t ≥ 1");
    }

    #[test]
    fn parameter_validation() {
        assert!(StepSchedule::classical(0.0).is_err());
        assert!(StepSchedule::proposed(-1.0).is_err());
        assert!(StepSchedule::general(1.0, 0.5, 0.0).is_err());
        assert!(StepSchedule::general(1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn general_two_one_is_proposed() {
        let general = StepSchedule::general(0.3, 2.0, 1.0).unwrap();
        let proposed = StepSchedule::proposed(0.3).unwrap();
        for t in 1..1000 {
            assert_eq!(general.step_size(t).unwrap(), proposed.step_size(t).unwrap());
        }
    }

    #[test]
    fn classical_hits_one_over_mu_at_t1() {
        let mu = 0.37;
        let s = StepSchedule::classical(mu).unwrap();
        assert!((mu * s.step_size(1).unwrap() - 1.0).abs() < 1e-15);
        let p = StepSchedule::proposed(mu).unwrap();
        assert!((mu * p.step_size(1).unwrap() - 1.0).abs() < 1e-15);
    }

    fn schedule() -> impl Strategy<Value = StepSchedule> {
        let mu = 1e-4f64..10.0;
        prop_oneof![
            mu.clone().prop_map(|mu| StepSchedule::Classical { mu }),
            mu.clone().prop_map(|mu| StepSchedule::Proposed { mu }),
            (mu, 0.5001f64..5.0, 0.0f64..10.0)
                .prop_map(|(mu, c, b)| StepSchedule::General { mu, c, b }),
        ]
    }

    proptest! {
        #[test]
        fn positive_and_non_increasing(s in schedule(), t in 1u64..1_000_000) {
            let now = s.step_size(t).unwrap();
            let next = s.step_size(t + 1).unwrap();
            prop_assert!(now > 0.0);
            prop_assert!(next <= now);
        }

        #[test]
        fn published_schedules_keep_mu_gamma_at_most_one(mu in 1e-4f64..10.0, t in 1u64..1_000_000) {
            for s in [StepSchedule::Classical { mu }, StepSchedule::Proposed { mu }] {
                prop_assert!(mu * s.step_size(t).unwrap() <= 1.0 + 1e-15);
            }
        }
    }
}
