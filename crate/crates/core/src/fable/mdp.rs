//! The two-bar evening as a one-step two-agent MDP.

use std::fmt;

use super::agent::{AgentPreferences, AnalyticalModel, Bar};
use super::episode::{draw_bar, EpisodeOutcome};
use super::learn::{observation_log_likelihood, LogOddsPrior};
use crate::error::{Error, Result};
use crate::inference::FiniteDistribution;
use crate::mdp::{AgentModel, ApprenticeModel, EpisodeTrajectory, TwoAgentMdp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarState {
    /// Before either agent has chosen.
    Evening,
    /// Terminal: both have chosen.
    Done(EpisodeOutcome),
}

impl fmt::Display for BarState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarState::Evening => f.write_str("evening"),
            BarState::Done(o) => write!(f, "done:{}{}", o.choice_a, o.choice_b),
        }
    }
}

/// Composed action: (agent 1's bar, agent 2's bar).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointChoice(pub Bar, pub Bar);

impl fmt::Display for JointChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BarChoiceMdp;

impl TwoAgentMdp for BarChoiceMdp {
    type State = BarState;
    type Action1 = Bar;
    type Action2 = Bar;
    type Action = JointChoice;

    fn initial(&self) -> BarState {
        BarState::Evening
    }

    fn is_terminal(&self, s: &BarState) -> bool {
        matches!(s, BarState::Done(_))
    }

    fn compose(&self, a1: &Bar, a2: &Bar) -> JointChoice {
        JointChoice(*a1, *a2)
    }

    fn transition(&self, s: &BarState, a: &JointChoice) -> Result<BarState> {
        match s {
            BarState::Evening => Ok(BarState::Done(EpisodeOutcome::new(a.0, a.1))),
            BarState::Done(_) => Err(Error::UndefinedTransition {
                state: s.to_string(),
                action: a.to_string(),
            }),
        }
    }
}

/// Sampler for an agent that chooses from its exact posterior at `depth`.
pub fn posterior_sampler(
    me: &AgentPreferences,
    other: &AgentPreferences,
    depth: usize,
) -> impl FnMut(&BarState, &mut crate::inference::SeededRng) -> Bar {
    let p = AnalyticalModel::new().p_first(me, other, depth);
    move |_, rng| draw_bar(p, rng)
}

/// Agent-1 model of one evening: prior `p1`, belief `q` about agent 2, and a
/// desired outcome of meeting with probability `pm`.
#[derive(Debug, Clone)]
pub struct BarAgentModel {
    pub prefs: AgentPreferences,
    pub belief_q: f64,
}

impl AgentModel<BarState> for BarAgentModel {
    type Own = Bar;
    type Other = Bar;

    fn prior_action_distribution(&self, _s: &BarState) -> FiniteDistribution<Bar> {
        FiniteDistribution::new(vec![Bar::First, Bar::Second], vec![self.prefs.p1, 1.0 - self.prefs.p1])
            .expect("p1 in (0, 1)")
    }

    fn belief_about_other(&self, _s: &BarState, _own: Option<&Bar>) -> FiniteDistribution<Bar> {
        FiniteDistribution::new(vec![Bar::First, Bar::Second], vec![self.belief_q, 1.0 - self.belief_q])
            .expect("q in [0, 1]")
    }

    fn desired_state_log_density(&self, _s: &BarState, next: &BarState) -> f64 {
        match next {
            BarState::Done(o) if o.met => self.prefs.pm.ln(),
            BarState::Done(_) => (1.0 - self.prefs.pm).ln(),
            BarState::Evening => f64::NEG_INFINITY,
        }
    }
}

/// The learner watches agent 2's bar across evenings and infers agent 2's
/// meeting log-odds, assuming agent 2 deliberates to `depth` about the learner.
#[derive(Debug, Clone)]
pub struct MeetingApprentice {
    pub learner: AgentPreferences,
    pub other_p1: f64,
    pub depth: usize,
    pub prior: LogOddsPrior,
}

impl ApprenticeModel<BarState, JointChoice> for MeetingApprentice {
    type Preference = f64;

    fn log_prior(&self, log_odds: &f64) -> f64 {
        self.prior.log_density(*log_odds)
    }

    fn trajectory_log_likelihood(&self, log_odds: &f64, trajectory: &EpisodeTrajectory<BarState, JointChoice>) -> f64 {
        let observed: Vec<Bar> = trajectory.actions.iter().map(|a| a.1).collect();
        observation_log_likelihood(&self.learner, self.other_p1, &observed, self.depth, *log_odds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fable::agent::posterior_given_belief;
    use crate::mdp::{one_step_action_posterior, replay, unroll_seeded, Turn};

    #[test]
    fn one_step_instance_has_two_states() {
        let m = BarChoiceMdp;
        let a = AgentPreferences::new("a", 0.55, 0.9).unwrap();
        let u = unroll_seeded(
            &m,
            posterior_sampler(&a, &a, 3),
            |s, _, r| posterior_sampler(&a, &a, 3)(s, r),
            Turn::Simultaneous,
            10,
            1,
        )
        .unwrap();
        assert_eq!(u.trajectory.actions.len(), 1);
        assert!(!u.truncated);
        let states = replay(&m, &u.trajectory).unwrap();
        assert_eq!(states.len(), 2);
        assert!(m.is_terminal(&states[1]));
    }

    #[test]
    fn generic_one_step_posterior_matches_fable_update() {
        let m = BarChoiceMdp;
        for (p1, pm, q) in [(0.55, 0.9, 0.55), (0.75, 0.25, 0.1), (0.3, 0.6, 0.95)] {
            let model = BarAgentModel {
                prefs: AgentPreferences::new("a", p1, pm).unwrap(),
                belief_q: q,
            };
            let post = one_step_action_posterior(&model, &BarState::Evening, Turn::Simultaneous, |own, other| {
                m.transition(&BarState::Evening, &m.compose(own, other))
            })
            .unwrap();
            let want = posterior_given_belief(&model.prefs, q);
            assert!((post.weights()[0] - want).abs() < 1e-12, "{} vs {want}", post.weights()[0]);
        }
    }

    #[test]
    fn apprentice_scores_agent_two_choices() {
        let learner = AgentPreferences::new("Alice", 0.55, 0.9).unwrap();
        let app = MeetingApprentice {
            learner: learner.clone(),
            other_p1: 0.55,
            depth: 2,
            prior: LogOddsPrior::default(),
        };
        let t = |b| EpisodeTrajectory {
            s0: BarState::Evening,
            actions: vec![JointChoice(Bar::Second, b)],
        };
        let trajs = [t(Bar::First), t(Bar::First), t(Bar::First)];
        let direct = app.prior.log_density(1.5)
            + observation_log_likelihood(&learner, 0.55, &[Bar::First; 3], 2, 1.5);
        assert!((app.log_posterior(&1.5, &trajs) - direct).abs() < 1e-12);
        assert!(app.log_posterior(&3.0, &trajs) > app.log_posterior(&-3.0, &trajs));
    }
}
