//! Agents with probabilistic preferences and their exact choice posteriors.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{logit, sigmoid};

/// Bar index, 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bar {
    First,
    Second,
}

impl Bar {
    pub fn index(self) -> u8 {
        match self {
            Bar::First => 1,
            Bar::Second => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Bar::First),
            2 => Ok(Bar::Second),
            _ => Err(Error::InvalidArgument(format!("bar index {i} is not 1 or 2"))),
        }
    }

    pub fn is_first(self) -> bool {
        self == Bar::First
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// An agent's preferences.
///
/// `p1` is the prior probability of choosing the first bar. `pm` is the
/// probability that the agent would pick the other agent's bar if it knew
/// where the other agent was going and otherwise had no preference between
/// bars: `pm > 0.5` means the agent wants to meet, `pm < 0.5` that it avoids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentPreferences {
    pub name: String,
    pub p1: f64,
    pub pm: f64,
}

fn check_open_unit(what: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} = {p} is not in (0, 1)")))
    }
}

impl AgentPreferences {
    pub fn new(name: impl Into<String>, p1: f64, pm: f64) -> Result<Self> {
        check_open_unit("p1", p1)?;
        check_open_unit("pm", pm)?;
        Ok(Self {
            name: name.into(),
            p1,
            pm,
        })
    }

    /// Builds preferences from a meeting log-odds `log(pm / (1 - pm))`.
    pub fn from_meeting_log_odds(name: impl Into<String>, p1: f64, log_odds: f64) -> Result<Self> {
        Self::new(name, p1, sigmoid(log_odds))
    }

    /// `r¹ − r²`: the reward difference that reproduces `p1` in a softmax agent.
    pub fn bar_reward_gap(&self) -> f64 {
        logit(self.p1)
    }

    /// `rᵐ`: the meeting reward of the equivalent softmax agent.
    pub fn meeting_reward(&self) -> f64 {
        self.pm.ln() - (1.0 - self.pm).ln()
    }

    fn key(&self) -> (u64, u64) {
        (self.p1.to_bits(), self.pm.to_bits())
    }
}

/// Log-probability of the agent's choice stochastically conditioned on the
/// other agent choosing bar 1 with probability `q`.
///
/// Choosing bar 1 scores `q·log pm + (1−q)·log(1−pm)`; choosing bar 2 swaps
/// the roles of `pm` and `1 − pm`.
pub fn meeting_log_likelihood(prefs: &AgentPreferences, q: f64, chose_first: bool) -> f64 {
    let (meet, miss) = (prefs.pm.ln(), (1.0 - prefs.pm).ln());
    if chose_first {
        q * meet + (1.0 - q) * miss
    } else {
        q * miss + (1.0 - q) * meet
    }
}

/// One level of deliberation: the posterior probability of choosing bar 1
/// given the belief `q` that the other agent chooses bar 1.
///
/// Equal to `normalize(p1·exp L(q, true), (1−p1)·exp L(q, false))`, written
/// through the log-likelihood difference `(2q − 1)·rᵐ` so that an indifferent
/// agent (`rᵐ = 0`) returns `p1` bit for bit.
pub fn posterior_given_belief(me: &AgentPreferences, q: f64) -> f64 {
    let delta = (2.0 * q - 1.0) * me.meeting_reward();
    me.p1 / (me.p1 + (1.0 - me.p1) * (-delta).exp())
}

/// Softmax agent with rewards `r¹ − r² = logit p1` and `rᵐ = logit pm`.
pub fn softmax_choice(me: &AgentPreferences, q: f64) -> f64 {
    let rm = me.meeting_reward();
    let u1 = me.bar_reward_gap() + q * rm;
    let u2 = (1.0 - q) * rm;
    let m = u1.max(u2);
    let (e1, e2) = ((u1 - m).exp(), (u2 - m).exp());
    e1 / (e1 + e2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChoiceMethod {
    Analytical,
    MonteCarlo,
}

impl fmt::Display for ChoiceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChoiceMethod::Analytical => "analytical",
            ChoiceMethod::MonteCarlo => "monte-carlo",
        })
    }
}

/// Probability of choosing bar 1 at a given deliberation depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoicePosterior {
    pub p_first: f64,
    pub depth: usize,
    pub method: ChoiceMethod,
    /// Retained chain length; `None` for the exact method.
    pub n_iters: Option<usize>,
    /// Binomial standard error; zero for the exact method.
    pub stderr: f64,
}

type PairKey = ((u64, u64), (u64, u64), usize);

/// Exact depth-bounded recursion, memoized over `(me, other, depth)`.
///
/// Depth 0 is the prior `p1`. At depth `d` the agent conditions on the other
/// agent's exact posterior at depth `d − 1`, computed with the roles swapped.
#[derive(Debug, Default)]
pub struct AnalyticalModel {
    cache: HashMap<PairKey, f64>,
}

impl AnalyticalModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn p_first(&mut self, me: &AgentPreferences, other: &AgentPreferences, depth: usize) -> f64 {
        let key = (me.key(), other.key(), depth);
        if let Some(&p) = self.cache.get(&key) {
            return p;
        }
        // Iterative from the deepest dependency upwards; the recursion
        // alternates roles so the chain is me, other, me, ...
        let mut p = if depth % 2 == 0 { me.p1 } else { other.p1 };
        for level in 1..=depth {
            let agent = if (depth - level) % 2 == 0 { me } else { other };
            p = posterior_given_belief(agent, p);
        }
        self.cache.insert(key, p);
        p
    }

    pub fn choice(&mut self, me: &AgentPreferences, other: &AgentPreferences, depth: usize) -> ChoicePosterior {
        ChoicePosterior {
            p_first: self.p_first(me, other, depth),
            depth,
            method: ChoiceMethod::Analytical,
            n_iters: None,
            stderr: 0.0,
        }
    }
}

pub fn analytical_choice(me: &AgentPreferences, other: &AgentPreferences, depth: usize) -> ChoicePosterior {
    AnalyticalModel::new().choice(me, other, depth)
}

/// Probabilities at depths `0..=max_depth` for one agent.
pub fn analytical_sequence(me: &AgentPreferences, other: &AgentPreferences, max_depth: usize) -> Vec<f64> {
    let mut model = AnalyticalModel::new();
    (0..=max_depth).map(|d| model.p_first(me, other, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn agent(p1: f64, pm: f64) -> AgentPreferences {
        AgentPreferences::new("a", p1, pm).unwrap()
    }

    #[test]
    fn rejects_degenerate_preferences() {
        assert!(AgentPreferences::new("x", 0.0, 0.5).is_err());
        assert!(AgentPreferences::new("x", 0.5, 1.0).is_err());
        assert!(AgentPreferences::new("x", f64::NAN, 0.5).is_err());
    }

    #[test]
    fn meeting_likelihood_oracles() {
        let a = agent(0.55, 0.9);
        assert_eq!(meeting_log_likelihood(&a, 1.0, true), 0.9f64.ln());
        // q ln pm + (1-q) ln(1-pm), direct summation
        assert_abs_diff_eq!(meeting_log_likelihood(&a, 0.55, true), -1.094_111_575_459_125, epsilon = 1e-12);
        assert_abs_diff_eq!(meeting_log_likelihood(&a, 0.55, false), -1.313_834_033_192_747, epsilon = 1e-12);
    }

    #[test]
    fn depth_zero_is_prior() {
        let (a, b) = (agent(0.3, 0.8), agent(0.9, 0.1));
        assert_eq!(analytical_choice(&a, &b, 0).p_first, 0.3);
        assert_eq!(analytical_choice(&b, &a, 0).p_first, 0.9);
    }

    #[test]
    fn symmetric_meeting_depth_one() {
        let a = agent(0.55, 0.9);
        assert_abs_diff_eq!(analytical_choice(&a, &a, 1).p_first, 0.603_577, epsilon = 1e-6);
    }

    #[test]
    fn strong_avoidance_sequence() {
        // Closed-form recursion evaluated independently.
        let expected = [0.55, 0.476574, 0.583856, 0.427233, 0.652305, 0.332648, 0.766059, 0.203248, 0.875251];
        let a = agent(0.55, 0.05);
        let seq = analytical_sequence(&a, &a, 8);
        for (got, want) in seq.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-6);
        }
    }

    #[test]
    fn asymmetric_recursion_alternates_roles() {
        // Depth 2 for a = a's update on b's depth-1 posterior, which uses a's prior.
        let (a, b) = (agent(0.75, 0.75), agent(0.45, 0.75));
        let q = posterior_given_belief(&b, a.p1);
        let want = posterior_given_belief(&a, q);
        assert_eq!(analytical_choice(&a, &b, 2).p_first, want);
        let mut m = AnalyticalModel::new();
        assert_eq!(m.p_first(&a, &b, 2), m.p_first(&a, &b, 2));
    }

    #[test]
    fn posterior_given_belief_matches_normalized_form() {
        let a = agent(0.55, 0.9);
        for q in [0.0, 0.2, 0.55, 1.0] {
            let u1 = a.p1.ln() + meeting_log_likelihood(&a, q, true);
            let u2 = (1.0 - a.p1).ln() + meeting_log_likelihood(&a, q, false);
            let direct = u1.exp() / (u1.exp() + u2.exp());
            assert_abs_diff_eq!(posterior_given_belief(&a, q), direct, epsilon = 1e-14);
        }
    }

    #[test]
    fn softmax_limits() {
        let a = agent(0.55, 0.5);
        for q in [0.0, 0.3, 1.0] {
            assert_abs_diff_eq!(softmax_choice(&a, q), 0.55, epsilon = 1e-15);
        }
        let b = agent(0.55, 0.97);
        assert_abs_diff_eq!(softmax_choice(&b, 0.5), 0.55, epsilon = 1e-15);
        assert_abs_diff_eq!(softmax_choice(&agent(0.55, 0.9), 0.55), 0.603_577, epsilon = 1e-6);
    }

    proptest! {
        // Dyadic values keep 1 - x exact, so the symmetries hold bit for bit.
        #[test]
        fn likelihood_symmetries(pm_k in 1u32..64, q_k in 0u32..=64) {
            let pm = pm_k as f64 / 64.0;
            let q = q_k as f64 / 64.0;
            let a = agent(0.5, pm);
            let flipped = agent(0.5, 1.0 - pm);
            prop_assert_eq!(meeting_log_likelihood(&a, q, false), meeting_log_likelihood(&flipped, q, true));
            prop_assert_eq!(meeting_log_likelihood(&a, q, false), meeting_log_likelihood(&a, 1.0 - q, true));
        }

        #[test]
        fn indifferent_agent_keeps_prior(p1 in 0.001f64..0.999, pb in 0.001f64..0.999, pmb in 0.001f64..0.999, depth in 0usize..25) {
            let me = agent(p1, 0.5);
            let other = agent(pb, pmb);
            prop_assert_eq!(analytical_choice(&me, &other, depth).p_first, p1);
        }
    }
}
