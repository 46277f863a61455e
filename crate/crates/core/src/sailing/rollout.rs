//! Simulated voyages and Monte-Carlo policy evaluation.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::dp::ValueTable;
use super::mdp::{trajectory_cost, SailingAction, SailingMdp};
use super::policy::{greedy_policy, leg_distribution, LegWeighting, PolicyParam};
use super::world::{Direction, SailingState, SailingWorld};
use crate::error::{Error, Result};
use crate::inference::{derive_seed, rng_from_seed, SeededRng};
use crate::mdp::{unroll, Turn, Unrolled};

pub const MIN_EVAL_ROLLOUTS: usize = 100;
/// Fraction of truncated rollouts above which an evaluation carries a warning.
pub const TRUNCATION_WARNING_FRACTION: f64 = 0.01;

/// How the boat picks its legs.
#[derive(Debug, Clone)]
pub enum SailingPolicy {
    Greedy,
    /// Argmin of the value table.
    Optimal(Arc<ValueTable>),
    /// Fixed `θ`.
    Softmax { theta: PolicyParam, weighting: LegWeighting },
    /// `θ` redrawn uniformly from the samples at the start of each voyage.
    Posterior { thetas: Arc<Vec<PolicyParam>>, weighting: LegWeighting },
}

impl fmt::Display for SailingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SailingPolicy::Greedy => f.write_str("greedy"),
            SailingPolicy::Optimal(_) => f.write_str("optimal"),
            SailingPolicy::Softmax { theta, .. } => write!(f, "softmax(theta={})", theta.theta()),
            SailingPolicy::Posterior { thetas, .. } => write!(f, "posterior({} samples)", thetas.len()),
        }
    }
}

pub fn default_max_steps(world: &SailingWorld) -> usize {
    10 * world.lake.size as usize
}

#[derive(Debug, Clone)]
pub struct Voyage {
    pub unrolled: Unrolled<SailingState, SailingAction>,
    pub total_cost: f64,
    pub truncated: bool,
    /// Log importance weight of the voyage relative to the distance-only
    /// policy: `Σ_t log Z_t` for cost-conditioned legs, 0 otherwise, and
    /// `-∞` for a truncated voyage.
    pub log_weight: f64,
    pub theta: Option<PolicyParam>,
}

/// Sails one voyage from the start corner. The initial wind is uniform.
pub fn rollout(world: &SailingWorld, policy: &SailingPolicy, max_steps: usize, seed: u64) -> Result<Voyage> {
    let mut rng = rng_from_seed(seed);
    rollout_with(world, policy, max_steps, &mut rng)
}

pub fn rollout_with(
    world: &SailingWorld,
    policy: &SailingPolicy,
    max_steps: usize,
    rng: &mut SeededRng,
) -> Result<Voyage> {
    let initial_wind = Direction::ALL[rng.random_range(0..8)];
    let mdp = SailingMdp {
        world: *world,
        initial_wind,
    };
    let (theta, weighting) = match policy {
        SailingPolicy::Softmax { theta, weighting } => (Some(*theta), Some(*weighting)),
        SailingPolicy::Posterior { thetas, weighting } => {
            if thetas.is_empty() {
                return Err(Error::InvalidArgument("no posterior samples of theta".into()));
            }
            (Some(thetas[rng.random_range(0..thetas.len())]), Some(*weighting))
        }
        _ => (None, None),
    };

    let mut log_weight = 0.0;
    let boat = |s: &SailingState, rng: &mut SeededRng| match (policy, theta, weighting) {
        (SailingPolicy::Greedy, ..) => greedy_policy(world, s),
        (SailingPolicy::Optimal(table), ..) => table.action(s).expect("non-terminal state"),
        (_, Some(theta), Some(weighting)) => {
            let legs = leg_distribution(world, s, theta, weighting);
            log_weight += legs.log_step_weight;
            legs.sample(rng)
        }
        _ => unreachable!("parametric policy without theta"),
    };
    let wind = |_: &SailingState, _: Option<&Direction>, rng: &mut SeededRng| world.wind.sample_shift(rng);
    let unrolled = unroll(&mdp, boat, wind, Turn::Simultaneous, max_steps, rng)?;

    let total_cost = trajectory_cost(world, &unrolled.states, &unrolled.trajectory.actions)?;
    let truncated = unrolled.truncated;
    Ok(Voyage {
        unrolled,
        total_cost,
        truncated,
        log_weight: if truncated { f64::NEG_INFINITY } else { log_weight },
        theta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyEvaluation {
    pub policy: String,
    pub size: u32,
    pub mean_cost: f64,
    pub stderr: f64,
    pub n_rollouts: usize,
    pub truncated: usize,
    pub warning: Option<String>,
}

/// Monte-Carlo mean travel cost over independent voyages. Voyage `i` uses
/// seed `derive_seed(seed, i)`, so the result does not depend on threading.
/// Truncated voyages enter the mean with their partial cost.
pub fn evaluate_policy(
    world: &SailingWorld,
    policy: &SailingPolicy,
    n_rollouts: usize,
    max_steps: usize,
    seed: u64,
) -> Result<PolicyEvaluation> {
    if n_rollouts < MIN_EVAL_ROLLOUTS {
        return Err(Error::InvalidArgument(format!(
            "n_rollouts = {n_rollouts} < {MIN_EVAL_ROLLOUTS}"
        )));
    }
    let results: Vec<(f64, bool)> = (0..n_rollouts as u64)
        .into_par_iter()
        .map(|i| rollout(world, policy, max_steps, derive_seed(seed, i)).map(|v| (v.total_cost, v.truncated)))
        .collect::<Result<_>>()?;

    let n = n_rollouts as f64;
    let mean = results.iter().map(|r| r.0).sum::<f64>() / n;
    let var = results.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let truncated = results.iter().filter(|r| r.1).count();
    let warning = (truncated as f64 > TRUNCATION_WARNING_FRACTION * n)
        .then(|| format!("{truncated} of {n_rollouts} rollouts hit the {max_steps}-step limit"));
    Ok(PolicyEvaluation {
        policy: policy.to_string(),
        size: world.lake.size,
        mean_cost: mean,
        stderr: (var / n).sqrt(),
        n_rollouts,
        truncated,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sailing::dp::value_iteration;

    #[test]
    fn deterministic_given_seed() {
        let w = SailingWorld::new(10).unwrap();
        let p = SailingPolicy::Softmax {
            theta: PolicyParam::new(3.0).unwrap(),
            weighting: LegWeighting::DistanceOnly,
        };
        let a = rollout(&w, &p, 100, 9).unwrap();
        let b = rollout(&w, &p, 100, 9).unwrap();
        assert_eq!(a.unrolled, b.unrolled);
        assert_eq!(a.total_cost, b.total_cost);
    }

    #[test]
    fn truncation_is_flagged() {
        let w = SailingWorld::new(10).unwrap();
        let p = SailingPolicy::Softmax {
            theta: PolicyParam::new(1e-3).unwrap(),
            weighting: LegWeighting::CostConditioned,
        };
        let v = rollout(&w, &p, 3, 1).unwrap();
        assert!(v.truncated);
        assert_eq!(v.log_weight, f64::NEG_INFINITY);
        assert!(v.total_cost > 0.0);
        let e = evaluate_policy(&w, &p, 100, 3, 1).unwrap();
        assert_eq!(e.truncated, 100);
        assert!(e.warning.is_some());
    }

    #[test]
    fn optimal_policy_reaches_goal() {
        let w = SailingWorld::new(6).unwrap();
        let t = Arc::new(value_iteration(&w, 1e-9, 10_000).unwrap());
        let v = rollout(&w, &SailingPolicy::Optimal(t), 60, 4).unwrap();
        assert!(!v.truncated);
        assert!(w.is_goal(v.unrolled.final_state()));
    }

    #[test]
    fn evaluation_rejects_small_runs() {
        let w = SailingWorld::new(4).unwrap();
        assert!(evaluate_policy(&w, &SailingPolicy::Greedy, 10, 40, 0).is_err());
    }
}
