use crate::error::{Error, Result};
use crate::vector::WeightVector;

/// Feasible set `K` of the projected update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectionDomain {
    WholeSpace,
    /// Centered Euclidean ball.
    Ball { radius: f64 },
}

impl ProjectionDomain {
    pub fn ball(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(ProjectionDomain::Ball { radius })
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            ProjectionDomain::WholeSpace => None,
            ProjectionDomain::Ball { radius } => Some(*radius),
        }
    }

    /// Euclidean projection onto the domain.
    pub fn project(&self, v: &WeightVector) -> WeightVector {
        let mut out = v.clone();
        self.project_in_place(&mut out);
        out
    }

    pub(crate) fn project_in_place(&self, v: &mut WeightVector) {
        if let ProjectionDomain::Ball { radius } = *self {
            let norm = v.norm();
            if norm > radius {
                let scale = radius / norm;
                *v = WeightVector::from_finite(v.as_slice().iter().map(|x| x * scale).collect());
            }
        }
    }

    /// Project raw entries, failing on non-finite input.
    pub fn project_raw(&self, entries: Vec<f64>) -> Result<WeightVector> {
        let v = WeightVector::new(entries)?;
        Ok(self.project(&v))
    }
}

/// Free-function form of [`ProjectionDomain::project`].
pub fn project(domain: &ProjectionDomain, v: &WeightVector) -> WeightVector {
    domain.project(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wv(v: &[f64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        let v = wv(&[3.0, 4.0]);
        assert_eq!(ProjectionDomain::WholeSpace.project(&v), v);
        let p = ProjectionDomain::ball(1.0).unwrap().project(&v);
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
        assert_eq!(ProjectionDomain::ball(10.0).unwrap().project(&v), v);
    }

    #[test]
    fn non_finite_input_rejected() {
        let err = ProjectionDomain::WholeSpace
            .project_raw(vec![1.0, f64::NAN])
            .unwrap_err();
        assert_eq!(err.to_string(), "non-finite vector");
    }

    #[test]
    fn bad_radius() {
        assert!(ProjectionDomain::ball(0.0).is_err());
        assert!(ProjectionDomain::ball(-1.0).is_err());
        assert!(ProjectionDomain::ball(f64::NAN).is_err());
    }

    fn domain() -> impl Strategy<Value = ProjectionDomain> {
        prop_oneof![
            Just(ProjectionDomain::WholeSpace),
            (0.01f64..20.0).prop_map(|r| ProjectionDomain::Ball { radius: r }),
        ]
    }

    proptest! {
        #[test]
        fn contraction(d in domain(), pair in (1usize..6).prop_flat_map(|n| (
            prop::collection::vec(-50.0f64..50.0, n),
            prop::collection::vec(-50.0f64..50.0, n),
        ))) {
            let (a, b) = pair;
            let (a, b) = (wv(&a), wv(&b));
            let lhs = d.project(&a).distance_squared(&d.project(&b)).sqrt();
            let rhs = a.distance_squared(&b).sqrt();
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
        }

        #[test]
        fn idempotent(d in domain(), v in prop::collection::vec(-50.0f64..50.0, 1..6)) {
            let once = d.project(&wv(&v));
            let twice = d.project(&once);
            for (x, y) in once.as_slice().iter().zip(twice.as_slice()) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
            if let Some(r) = d.radius() {
                prop_assert!(once.norm() <= r * (1.0 + 1e-12));
            }
        }
    }
}
