//! Leg-choice policies.
//!
//! The parametric policy scores each feasible leg by `−θ · d(next, goal)`:
//! larger `θ` concentrates on legs that bring the boat closer to the goal,
//! `θ → 0` approaches a uniform choice. It ignores the wind except for
//! excluding the into-wind leg.
//!
//! Conditioning the boat's choice on the observed wind with trajectory
//! likelihood `exp(−travel cost)` multiplies each leg by `exp(−leg cost)`.
//! [`LegWeighting::CostConditioned`] is that per-leg posterior, and its
//! per-step normalizer `Z = Σ π_θ(leg) · exp(−cost(leg))` is the incremental
//! importance weight used to estimate the marginal likelihood of `θ`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::world::{Direction, SailingState, SailingWorld};
use crate::error::{Error, Result};
use crate::inference::SeededRng;

/// Concentration parameter of the parametric policy.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PolicyParam(f64);

impl PolicyParam {
    pub fn new(theta: f64) -> Result<Self> {
        if theta > 0.0 && theta.is_finite() {
            Ok(Self(theta))
        } else {
            Err(Error::InvalidArgument(format!("theta = {theta} must be positive and finite")))
        }
    }

    pub fn theta(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LegWeighting {
    /// `π_θ(leg) ∝ exp(−θ·d)`.
    DistanceOnly,
    /// `∝ π_θ(leg) · exp(−leg cost)`.
    CostConditioned,
}

/// Legs, their probabilities, and the log of the step normalizer relative to
/// the distance-only policy (zero for [`LegWeighting::DistanceOnly`]).
#[derive(Debug, Clone, PartialEq)]
pub struct LegDistribution {
    pub legs: Vec<Direction>,
    pub probs: Vec<f64>,
    pub log_step_weight: f64,
}

impl LegDistribution {
    pub fn sample(&self, rng: &mut SeededRng) -> Direction {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (leg, p) in self.legs.iter().zip(&self.probs) {
            acc += p;
            if u < acc {
                return *leg;
            }
        }
        *self.legs.last().expect("nonempty leg set")
    }
}

fn normalize_log(scores: &[f64]) -> (Vec<f64>, f64) {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = w.iter().sum();
    (w.iter().map(|x| x / z).collect(), max + z.ln())
}

pub fn leg_distribution(
    world: &SailingWorld,
    s: &SailingState,
    theta: PolicyParam,
    weighting: LegWeighting,
) -> LegDistribution {
    let goal = world.lake.goal();
    let legs = world.feasible_legs(s);
    let goal_distances: Vec<f64> = legs.iter().map(|h| s.position.step(*h).distance(goal)).collect();
    let prior: Vec<f64> = goal_distances.iter().map(|d| -theta.theta() * d).collect();
    let (prior_probs, log_z) = normalize_log(&prior);
    match weighting {
        LegWeighting::DistanceOnly => LegDistribution {
            legs,
            probs: prior_probs,
            log_step_weight: 0.0,
        },
        LegWeighting::CostConditioned => {
            let scores: Vec<f64> = legs
                .iter()
                .zip(&prior)
                .map(|(h, lp)| {
                    let (cost, _) = world.leg_cost(s, *h).expect("feasible leg");
                    lp - cost
                })
                .collect();
            let (probs, log_zc) = normalize_log(&scores);
            LegDistribution {
                legs,
                probs,
                log_step_weight: log_zc - log_z,
            }
        }
    }
}

/// `log Pr(leg) = −θ·d(next, goal) − log Z` over the feasible legs.
pub fn policy_log_prob(world: &SailingWorld, theta: PolicyParam, s: &SailingState, heading: Direction) -> Result<f64> {
    if !world.is_feasible(s, heading) {
        return Err(Error::InfeasibleLeg(format!("{heading} in state {s}")));
    }
    let goal = world.lake.goal();
    let scores: Vec<f64> = world
        .feasible_legs(s)
        .iter()
        .map(|h| -theta.theta() * s.position.step(*h).distance(goal))
        .collect();
    let (_, log_z) = normalize_log(&scores);
    Ok(-theta.theta() * s.position.step(heading).distance(goal) - log_z)
}

/// Heads for the feasible leg that most reduces the distance to the goal;
/// ties go to the cheaper leg, then to the lower direction index.
pub fn greedy_policy(world: &SailingWorld, s: &SailingState) -> Direction {
    let goal = world.lake.goal();
    world
        .feasible_legs(s)
        .into_iter()
        .map(|h| {
            let d2 = s.position.step(h).squared_distance(goal);
            let (cost, _) = world.leg_cost(s, h).expect("feasible leg");
            (d2, cost, h)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)))
        .map(|(_, _, h)| h)
        .expect("nonempty leg set")
}
