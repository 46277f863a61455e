//! Two flawed formulations of choosing a bar with respect to another agent,
//! evaluated against what they actually achieve.
//!
//! Both condition on the other agent's choice as if it were already known.
//! The first conditions the agent's own choice on the anticipated location of
//! the other; the second replaces nested inference by conditioning on a single
//! sample of the other agent's choice. Rewards here are explicit: 1 for the
//! desired outcome (meeting or evading), 0 otherwise.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MistakeReport {
    pub model_name: String,
    /// Scenario parameters, for display.
    pub parameters: String,
    /// Probability the flawed policy puts on its preferred bar.
    pub policy: f64,
    /// Expected reward the flawed model believes it obtains.
    pub claimed_value: f64,
    /// Expected reward the flawed policy actually obtains.
    pub true_value: f64,
    /// Expected reward of the best deterministic choice.
    pub rational_value: f64,
}

fn check_open_unit(what: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} = {p} is not in (0, 1)")))
    }
}

/// Posterior of choosing bar 1 when the anticipated choice of the other agent
/// (bar 1 with probability `q_hat`) is conditioned on as an observation:
/// `p1·q̂ / (p1·q̂ + (1−p1)(1−q̂))`.
pub fn future_as_present_posterior(p1: f64, q_hat: f64) -> f64 {
    let a = p1 * q_hat;
    a / (a + (1.0 - p1) * (1.0 - q_hat))
}

/// Repeatedly feeds the posterior back as the belief, `rounds` times. The
/// flawed model drifts towards certainty with each round.
pub fn future_as_present_iterated(p1: f64, q_hat: f64, rounds: usize) -> Vec<f64> {
    std::iter::successors(Some(q_hat), |q| Some(future_as_present_posterior(p1, *q)))
        .skip(1)
        .take(rounds)
        .collect()
}

/// Report for the meeting scenario where the agent wants to meet.
pub fn future_as_present_report(p1: f64, q_hat: f64) -> Result<MistakeReport> {
    check_open_unit("p1", p1)?;
    check_open_unit("q_hat", q_hat)?;
    let p = future_as_present_posterior(p1, q_hat);
    Ok(MistakeReport {
        model_name: "future-as-present".into(),
        parameters: format!("p1={p1} q_hat={q_hat}"),
        policy: p,
        // conditioned on meeting
        claimed_value: 1.0,
        true_value: p * q_hat + (1.0 - p) * (1.0 - q_hat),
        rational_value: q_hat.max(1.0 - q_hat),
    })
}

/// The evader conditions on one sampled chaser location and goes to the other
/// bar, so it ends up at bar 2 exactly when the sample says bar 1.
pub fn single_sample_nesting_policy(evader_p1: f64, chaser_p1: f64) -> Result<MistakeReport> {
    check_open_unit("evader_p1", evader_p1)?;
    check_open_unit("chaser_p1", chaser_p1)?;
    let p_second = chaser_p1;
    let c = chaser_p1;
    Ok(MistakeReport {
        model_name: "single-sample-nesting".into(),
        parameters: format!("evader_p1={evader_p1} chaser_p1={chaser_p1}"),
        policy: p_second,
        claimed_value: 1.0,
        true_value: p_second * c + (1.0 - p_second) * (1.0 - c),
        rational_value: c.max(1.0 - c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn future_as_present_oracles() {
        assert_eq!(future_as_present_posterior(0.55, 0.5), 0.55);
        // 0.3025 / (0.3025 + 0.2025)
        assert_abs_diff_eq!(future_as_present_posterior(0.55, 0.55), 0.599_009_900_990_099, epsilon = 1e-12);
        assert_abs_diff_eq!(future_as_present_posterior(0.55, 1.0 - 1e-15), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn monotone_in_belief() {
        let v: Vec<f64> = (1..100).map(|k| future_as_present_posterior(0.55, k as f64 / 100.0)).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        for p1 in [0.1, 0.37, 0.55, 0.9] {
            assert_eq!(future_as_present_posterior(p1, 0.5), p1);
        }
    }

    #[test]
    fn iteration_drifts_to_certainty() {
        let v = future_as_present_iterated(0.55, 0.55, 30);
        assert_eq!(v.len(), 30);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert!(v[29] > 0.99);
    }

    #[test]
    fn single_sample_oracles() {
        let r = single_sample_nesting_policy(0.5, 0.55).unwrap();
        assert_abs_diff_eq!(r.policy, 0.55, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rational_value, 0.55, epsilon = 1e-15);
        assert_abs_diff_eq!(r.true_value, 0.505, epsilon = 1e-12);
        assert_eq!(r.claimed_value, 1.0);
        let s = single_sample_nesting_policy(0.5, 0.5).unwrap();
        assert_eq!(s.true_value, 0.5);
        assert_eq!(s.rational_value, 0.5);
    }

    fn enumerate_true_value(p_second: f64, chaser_p1: f64) -> f64 {
        // (evader bar, chaser bar) in {1,2}²; reward 1 when they differ
        let mut v = 0.0;
        for (e, pe) in [(1, 1.0 - p_second), (2, p_second)] {
            for (c, pc) in [(1, chaser_p1), (2, 1.0 - chaser_p1)] {
                if e != c {
                    v += pe * pc;
                }
            }
        }
        v
    }

    #[test]
    fn strictly_suboptimal_off_center() {
        for k in 1..100 {
            let c = k as f64 / 100.0;
            let r = single_sample_nesting_policy(0.5, c).unwrap();
            let brute = enumerate_true_value(r.policy, c);
            assert_eq!(r.true_value, brute);
            if k == 50 {
                assert!((r.true_value - r.rational_value).abs() < 1e-15);
            } else {
                assert!(r.true_value < r.rational_value, "c = {c}");
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(single_sample_nesting_policy(0.0, 0.5).is_err());
        assert!(future_as_present_report(0.5, 1.0).is_err());
    }
}
