//! Two-agent Markov decision processes with deterministic transitions.
//!
//! Two agents pick actions, the actions are composed into one process action
//! and a deterministic transition function moves the state. All randomness
//! lives in the agents; a stochastic environment is modeled as a neutral
//! second agent that ignores the first.
//!
//! Given the initial state and the composed actions, the visited states are
//! determined, so a trajectory stores only `(s0, actions)` and [`replay`]
//! reconstructs the rest.

use std::fmt::{Debug, Display};
use std::io::Write;

use crate::error::{Error, Result};
use crate::inference::{rng_from_seed, stochastic_log_weight, FiniteDistribution, SeededRng};

pub trait TwoAgentMdp {
    type State: Clone + PartialEq + Debug;
    type Action1: Clone + Debug;
    type Action2: Clone + Debug;
    type Action: Clone + Debug;

    fn initial(&self) -> Self::State;

    /// Whether `s` is the absorbing terminal state.
    fn is_terminal(&self, s: &Self::State) -> bool;

    fn compose(&self, a1: &Self::Action1, a2: &Self::Action2) -> Self::Action;

    /// Deterministic transition; errors when `a` is not defined in `s`.
    fn transition(&self, s: &Self::State, a: &Self::Action) -> Result<Self::State>;
}

/// Whether the second agent observes the first agent's action before acting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Simultaneous,
    Sequential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrajectory<S, A> {
    pub s0: S,
    pub actions: Vec<A>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Unrolled<S, A> {
    pub trajectory: EpisodeTrajectory<S, A>,
    /// Visited states, `s0` first.
    pub states: Vec<S>,
    /// True when `max_steps` was hit before the terminal state.
    pub truncated: bool,
}

impl<S, A> Unrolled<S, A> {
    pub fn final_state(&self) -> &S {
        self.states.last().expect("at least the initial state")
    }
}

/// Runs one episode: `a1 ~ m1(s)`, `a2 ~ m2(s[, a1])`, `s ← t(s, a1 ∘ a2)` until
/// the terminal state or `max_steps` transitions.
pub fn unroll<M, F1, F2>(
    mdp: &M,
    mut agent_1: F1,
    mut agent_2: F2,
    turn: Turn,
    max_steps: usize,
    rng: &mut SeededRng,
) -> Result<Unrolled<M::State, M::Action>>
where
    M: TwoAgentMdp,
    F1: FnMut(&M::State, &mut SeededRng) -> M::Action1,
    F2: FnMut(&M::State, Option<&M::Action1>, &mut SeededRng) -> M::Action2,
{
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    let s0 = mdp.initial();
    let mut s = s0.clone();
    let mut states = vec![s0.clone()];
    let mut actions = Vec::new();
    while !mdp.is_terminal(&s) && actions.len() < max_steps {
        let a1 = agent_1(&s, rng);
        let seen = match turn {
            Turn::Simultaneous => None,
            Turn::Sequential => Some(&a1),
        };
        let a2 = agent_2(&s, seen, rng);
        let a = mdp.compose(&a1, &a2);
        s = mdp.transition(&s, &a)?;
        actions.push(a);
        states.push(s.clone());
    }
    let truncated = !mdp.is_terminal(&s);
    Ok(Unrolled {
        trajectory: EpisodeTrajectory { s0, actions },
        states,
        truncated,
    })
}

/// [`unroll`] with a fresh generator seeded from `seed`.
pub fn unroll_seeded<M, F1, F2>(
    mdp: &M,
    agent_1: F1,
    agent_2: F2,
    turn: Turn,
    max_steps: usize,
    seed: u64,
) -> Result<Unrolled<M::State, M::Action>>
where
    M: TwoAgentMdp,
    F1: FnMut(&M::State, &mut SeededRng) -> M::Action1,
    F2: FnMut(&M::State, Option<&M::Action1>, &mut SeededRng) -> M::Action2,
{
    unroll(mdp, agent_1, agent_2, turn, max_steps, &mut rng_from_seed(seed))
}

/// Reconstructs the visited states of a trajectory.
pub fn replay<M: TwoAgentMdp>(mdp: &M, trajectory: &EpisodeTrajectory<M::State, M::Action>) -> Result<Vec<M::State>> {
    let mut s = trajectory.s0.clone();
    let mut states = vec![s.clone()];
    for (step, a) in trajectory.actions.iter().enumerate() {
        if mdp.is_terminal(&s) {
            return Err(Error::InvalidTrajectory {
                step,
                reason: "action after the terminal state".into(),
            });
        }
        s = mdp.transition(&s, a).map_err(|e| Error::InvalidTrajectory {
            step,
            reason: e.to_string(),
        })?;
        states.push(s.clone());
    }
    Ok(states)
}

/// Writes `step,action,state` rows; row 0 has an empty action and `s0`.
pub fn write_trajectory_csv<M, W>(mdp: &M, trajectory: &EpisodeTrajectory<M::State, M::Action>, out: W) -> Result<()>
where
    M: TwoAgentMdp,
    M::State: Display,
    M::Action: Display,
    W: Write,
{
    let states = replay(mdp, trajectory)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "action", "state"])?;
    w.write_record(["0".to_string(), String::new(), states[0].to_string()])?;
    for (i, (a, s)) in trajectory.actions.iter().zip(&states[1..]).enumerate() {
        w.write_record([(i + 1).to_string(), a.to_string(), s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// An agent's model of a decision: a prior over its own actions, a belief
/// about the other agent's action (optionally given its own, for sequential
/// play) and a distribution of desired successor states.
///
/// The desired-state distribution enters as a likelihood weight on the
/// realized successor, which is deterministic given both actions.
pub trait AgentModel<S> {
    type Own: Clone + PartialEq + Debug;
    type Other: Clone + PartialEq + Debug;

    fn prior_action_distribution(&self, s: &S) -> FiniteDistribution<Self::Own>;

    fn belief_about_other(&self, s: &S, own: Option<&Self::Own>) -> FiniteDistribution<Self::Other>;

    fn desired_state_log_density(&self, s: &S, next: &S) -> f64;
}

/// Posterior over the agent's own action for a single step: the prior times
/// the desired-state likelihood, stochastically conditioned on the belief
/// about the other agent. Deeper recursion into successor states is left to
/// concrete solvers.
pub fn one_step_action_posterior<S, A, T>(
    agent: &A,
    s: &S,
    turn: Turn,
    mut successor: T,
) -> Result<FiniteDistribution<A::Own>>
where
    A: AgentModel<S>,
    T: FnMut(&A::Own, &A::Other) -> Result<S>,
{
    let prior = agent.prior_action_distribution(s);
    let mut log_w = Vec::with_capacity(prior.support().len());
    for (own, p) in prior.iter() {
        let seen = match turn {
            Turn::Simultaneous => None,
            Turn::Sequential => Some(own),
        };
        let belief = agent.belief_about_other(s, seen);
        let lw = stochastic_log_weight(
            |other: &A::Other| Ok(agent.desired_state_log_density(s, &successor(own, other)?)),
            &belief,
        )?;
        log_w.push(p.ln() + lw);
    }
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::InvalidDistribution("all actions have zero posterior weight".into()));
    }
    let w: Vec<f64> = log_w.iter().map(|l| (l - max).exp()).collect();
    let z: f64 = w.iter().sum();
    let mut weights: Vec<f64> = w.iter().map(|x| x / z).collect();
    // absorb rounding so the weights validate
    let drift = 1.0 - weights.iter().sum::<f64>();
    if let Some(first) = weights.iter_mut().max_by(|a, b| a.total_cmp(b)) {
        *first += drift;
    }
    FiniteDistribution::new(prior.support().to_vec(), weights)
}

/// Learning an agent's preferences from observed behavior: the desired-state
/// preference becomes latent with a prior, and trajectories are observed.
pub trait ApprenticeModel<S, A> {
    type Preference;

    fn log_prior(&self, preference: &Self::Preference) -> f64;

    fn trajectory_log_likelihood(&self, preference: &Self::Preference, trajectory: &EpisodeTrajectory<S, A>) -> f64;

    fn log_posterior(&self, preference: &Self::Preference, trajectories: &[EpisodeTrajectory<S, A>]) -> f64 {
        let prior = self.log_prior(preference);
        if prior == f64::NEG_INFINITY {
            return prior;
        }
        prior
            + trajectories
                .iter()
                .map(|t| self.trajectory_log_likelihood(preference, t))
                .sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Counter that terminates at `limit`; action = a1 + a2.
    struct Counter {
        limit: i32,
    }

    impl TwoAgentMdp for Counter {
        type State = i32;
        type Action1 = i32;
        type Action2 = i32;
        type Action = i32;

        fn initial(&self) -> i32 {
            0
        }
        fn is_terminal(&self, s: &i32) -> bool {
            *s >= self.limit
        }
        fn compose(&self, a1: &i32, a2: &i32) -> i32 {
            a1 + a2
        }
        fn transition(&self, s: &i32, a: &i32) -> Result<i32> {
            if *a < 0 {
                return Err(Error::UndefinedTransition {
                    state: s.to_string(),
                    action: a.to_string(),
                });
            }
            Ok(s + a)
        }
    }

    #[test]
    fn constant_agents_terminate_in_three_steps() {
        let m = Counter { limit: 3 };
        let u = unroll_seeded(&m, |_, _| 1, |_, _, _| 0, Turn::Simultaneous, 100, 0).unwrap();
        assert_eq!(u.trajectory.actions, vec![1, 1, 1]);
        assert!(!u.truncated);
        assert_eq!(replay(&m, &u.trajectory).unwrap(), u.states);
        assert_eq!(*u.final_state(), 3);
    }

    #[test]
    fn truncation_is_flagged() {
        let m = Counter { limit: 1000 };
        let u = unroll_seeded(&m, |_, _| 1, |_, _, _| 0, Turn::Simultaneous, 5, 0).unwrap();
        assert!(u.truncated);
        assert_eq!(u.trajectory.actions.len(), 5);
        assert!(unroll_seeded(&m, |_, _| 1, |_, _, _| 0, Turn::Simultaneous, 0, 0).is_err());
    }

    #[test]
    fn sequential_second_agent_sees_first() {
        let m = Counter { limit: 10 };
        let u = unroll_seeded(
            &m,
            |_, r| r.random_range(1..3),
            |_, a1: Option<&i32>, _| 3 - *a1.expect("sequential"),
            Turn::Sequential,
            100,
            9,
        )
        .unwrap();
        assert!(u.trajectory.actions.iter().all(|a| *a == 3));
    }

    #[test]
    fn structural_errors() {
        let m = Counter { limit: 3 };
        let e = unroll_seeded(&m, |_, _| -1, |_, _, _| 0, Turn::Simultaneous, 10, 0).unwrap_err();
        assert!(matches!(e, Error::UndefinedTransition { .. }));
        let bad = EpisodeTrajectory { s0: 0, actions: vec![1, -2] };
        assert!(matches!(replay(&m, &bad), Err(Error::InvalidTrajectory { step: 1, .. })));
        let past_end = EpisodeTrajectory { s0: 0, actions: vec![3, 1] };
        assert!(matches!(replay(&m, &past_end), Err(Error::InvalidTrajectory { step: 1, .. })));
        let empty = EpisodeTrajectory { s0: 0, actions: vec![] };
        assert_eq!(replay(&m, &empty).unwrap(), vec![0]);
    }

    #[test]
    fn trajectory_csv() {
        let m = Counter { limit: 2 };
        let t = EpisodeTrajectory { s0: 0, actions: vec![1, 1] };
        let mut buf = Vec::new();
        write_trajectory_csv(&m, &t, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "step,action,state\n0,,0\n1,1,1\n2,1,2\n");
    }
}
