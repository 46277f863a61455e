//! Finite distributions and stochastic conditioning.
//!
//! Stochastic conditioning scores a latent value `x` against an observed
//! *distribution* of `y` rather than a single observation: the log-weight is
//! the expectation of `log p(y | x)` under the observed distribution. For a
//! finite support that expectation is a weighted sum.

use crate::error::{Error, Result};

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A distribution over a finite, duplicate-free support.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution<T> {
    support: Vec<T>,
    weights: Vec<f64>,
}

impl<T: PartialEq + std::fmt::Debug> FiniteDistribution<T> {
    pub fn new(support: Vec<T>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if support.len() != weights.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} outcomes but {} weights",
                support.len(),
                weights.len()
            )));
        }
        for (i, y) in support.iter().enumerate() {
            if support[..i].contains(y) {
                return Err(Error::InvalidDistribution(format!("duplicate outcome {y:?}")));
            }
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("invalid weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { support, weights })
    }
}

impl<T> FiniteDistribution<T> {
    pub fn point_mass(outcome: T) -> Self {
        Self {
            support: vec![outcome],
            weights: vec![1.0],
        }
    }

    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.support.iter().zip(self.weights.iter().copied())
    }
}

impl FiniteDistribution<bool> {
    /// Bernoulli distribution over `{true, false}` with `P(true) = p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!("bernoulli p = {p}")));
        }
        Self::new(vec![true, false], vec![p, 1.0 - p])
    }
}

/// Log-weight of stochastically conditioning on `dist`: `Σ_y q(y) · log p(y | x)`.
///
/// Outcomes with zero weight are skipped, so an impossible outcome only
/// matters when the observed distribution actually puts mass on it, in which
/// case the result is `-∞`.
pub fn stochastic_log_weight<T, F>(mut log_density: F, dist: &FiniteDistribution<T>) -> Result<f64>
where
    F: FnMut(&T) -> Result<f64>,
{
    let mut total = 0.0;
    for (y, q) in dist.iter() {
        if q == 0.0 {
            continue;
        }
        let lp = log_density(y)?;
        if lp == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        if lp.is_nan() {
            return Err(Error::Evaluator {
                outcome: String::new(),
                reason: "log-density is NaN".into(),
            });
        }
        total += q * lp;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn lik(a: f64, b: f64) -> impl Fn(&bool) -> Result<f64> {
        move |y: &bool| Ok(if *y { a.ln() } else { b.ln() })
    }

    #[test]
    fn point_mass_is_ordinary_conditioning() {
        let d = FiniteDistribution::point_mass(true);
        assert_eq!(stochastic_log_weight(lik(0.9, 0.1), &d).unwrap(), 0.9f64.ln());
    }

    #[test]
    fn fair_coin_gives_geometric_mean() {
        let d = FiniteDistribution::bernoulli(0.5).unwrap();
        let w = stochastic_log_weight(lik(0.3, 0.8), &d).unwrap();
        assert_abs_diff_eq!(w, 0.5 * (0.3f64.ln() + 0.8f64.ln()), epsilon = 1e-15);
    }

    #[test]
    fn bernoulli_055_oracle() {
        // 0.55 ln 0.9 + 0.45 ln 0.1 = -1.0941115754591249
        let d = FiniteDistribution::bernoulli(0.55).unwrap();
        let w = stochastic_log_weight(lik(0.9, 0.1), &d).unwrap();
        assert_abs_diff_eq!(w, -1.094_111_575_459_124_9, epsilon = 1e-12);
    }

    #[test]
    fn zero_likelihood_on_supported_outcome_is_neg_infinity() {
        let d = FiniteDistribution::bernoulli(0.5).unwrap();
        let w = stochastic_log_weight(|y: &bool| Ok(if *y { 0.0 } else { f64::NEG_INFINITY }), &d);
        assert_eq!(w.unwrap(), f64::NEG_INFINITY);
        let d = FiniteDistribution::bernoulli(1.0).unwrap();
        let w = stochastic_log_weight(|y: &bool| Ok(if *y { 0.0 } else { f64::NEG_INFINITY }), &d);
        assert_eq!(w.unwrap(), 0.0);
    }

    #[test]
    fn evaluator_error_propagates() {
        let d = FiniteDistribution::bernoulli(0.5).unwrap();
        let r = stochastic_log_weight(
            |y: &bool| {
                if *y {
                    Ok(0.0)
                } else {
                    Err(Error::Evaluator { outcome: "false".into(), reason: "boom".into() })
                }
            },
            &d,
        );
        assert!(matches!(r, Err(Error::Evaluator { .. })));
    }

    #[test]
    fn rejects_invalid_distributions() {
        assert!(FiniteDistribution::<u8>::new(vec![], vec![]).is_err());
        assert!(FiniteDistribution::new(vec![1, 1], vec![0.5, 0.5]).is_err());
        assert!(FiniteDistribution::new(vec![1, 2], vec![0.5, 0.6]).is_err());
        assert!(FiniteDistribution::new(vec![1, 2], vec![-0.1, 1.1]).is_err());
        assert!(FiniteDistribution::bernoulli(1.5).is_err());
    }

    proptest! {
        #[test]
        fn linear_in_mixture_weights(
            p in 0.0f64..=1.0, r in 0.0f64..=1.0, alpha in 0.0f64..=1.0,
            a in 1e-6f64..1.0, b in 1e-6f64..1.0,
        ) {
            let d1 = FiniteDistribution::bernoulli(p).unwrap();
            let d2 = FiniteDistribution::bernoulli(r).unwrap();
            let mix = FiniteDistribution::bernoulli(alpha * p + (1.0 - alpha) * r).unwrap();
            let w1 = stochastic_log_weight(lik(a, b), &d1).unwrap();
            let w2 = stochastic_log_weight(lik(a, b), &d2).unwrap();
            let wm = stochastic_log_weight(lik(a, b), &mix).unwrap();
            prop_assert!((wm - (alpha * w1 + (1.0 - alpha) * w2)).abs() < 1e-12 * (1.0 + wm.abs()));
        }
    }
}
