//! Posterior over the policy parameter given the travel-cost preference.
//!
//! The likelihood of `θ` is `E[exp(−travel cost)]` under the distance-only
//! policy with that `θ`. It is estimated without bias by sequential
//! importance sampling. Both the legs and the wind shifts are drawn from a
//! proposal twisted towards cheap continuations by a look-ahead
//! `ψ(s) = exp(−λ·V*(s))`, where `V*` is the optimal cost-to-go:
//!
//! ```text
//! q(leg)   ∝ π_θ(leg) · exp(−cost) · Σ_shift p(shift) · ψ(s')
//! q(shift) ∝ p(shift) · ψ(s')
//! ```
//!
//! Each step then carries the weight `Z̃ / ψ(s')`, with `Z̃` the normalizer
//! of `q(leg)`. With `λ = 0` this reduces to cost-conditioned legs under the
//! true wind. Estimates are combined with log-mean-exp, which needs no
//! stabilizing offset.

use std::cell::Cell;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::dp::{value_iteration, ValueTable, DEFAULT_MAX_SWEEPS, DEFAULT_TOLERANCE};
use super::mdp::SailingMdp;
use super::policy::{leg_distribution, LegWeighting, PolicyParam};
use super::rollout::{default_max_steps, evaluate_policy, PolicyEvaluation, SailingPolicy};
use super::world::{Direction, SailingState, SailingWorld, WindShift};
use crate::error::{Error, Result};
use crate::inference::{
    derive_seed, gaussian_random_walk, log_mean_exp, pseudo_marginal_mh, rng_from_seed, ChainConfig,
    PosteriorSamples, SeededRng,
};
use crate::mdp::{unroll, Turn};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InferConfig {
    /// Retained samples of `log θ`.
    pub n_samples: usize,
    pub burn_in: usize,
    /// Voyages per likelihood estimate.
    pub n_inner: usize,
    /// Strength `λ` of the look-ahead twist in the importance proposal.
    pub twist: f64,
    /// Standard deviation of the random-walk proposal on `log θ`.
    pub proposal_scale: f64,
    /// Support of the flat prior on `log θ`.
    pub log_theta_min: f64,
    pub log_theta_max: f64,
    pub init_log_theta: f64,
    /// Defaults to ten times the lake size.
    pub max_steps: Option<usize>,
    pub seed: u64,
}

impl Default for InferConfig {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            burn_in: 1_000,
            n_inner: 20,
            twist: 0.4,
            proposal_scale: 0.25,
            log_theta_min: 0.0,
            log_theta_max: 100f64.ln(),
            init_log_theta: 1.5,
            max_steps: None,
            seed: 0,
        }
    }
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

fn draw_index(log_probs: &[f64], rng: &mut SeededRng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, lp) in log_probs.iter().enumerate() {
        acc += lp.exp();
        if u < acc {
            return i;
        }
    }
    log_probs.len() - 1
}

/// Look-ahead for the importance proposal.
#[derive(Debug, Clone)]
pub struct Twist {
    table: Option<Arc<ValueTable>>,
    strength: f64,
}

impl Twist {
    /// No look-ahead: cost-conditioned legs, untouched wind.
    pub fn none() -> Self {
        Self {
            table: None,
            strength: 0.0,
        }
    }

    pub fn from_values(table: Arc<ValueTable>, strength: f64) -> Self {
        Self {
            table: Some(table),
            strength,
        }
    }

    fn log_psi(&self, s: &SailingState) -> f64 {
        match &self.table {
            Some(t) if self.strength != 0.0 => -self.strength * t.value(s),
            _ => 0.0,
        }
    }
}

/// Successors of sailing `heading` from `s`, one per wind shift, with their
/// log prior probability.
fn successors(world: &SailingWorld, s: &SailingState, heading: Direction) -> [(WindShift, f64, SailingState); 3] {
    let (_, tack) = world.leg_cost(s, heading).expect("feasible leg");
    let position = s.position.step(heading);
    world.wind.shifts().map(|(shift, p)| {
        (
            shift,
            p.ln(),
            SailingState {
                position,
                wind: s.wind.rotate(shift.ticks()),
                tack,
            },
        )
    })
}

/// Log importance weight of one voyage sailed from the twisted proposal;
/// its exponential is an unbiased estimate of `E_θ[exp(−travel cost)]`.
pub fn weighted_voyage(
    world: &SailingWorld,
    theta: PolicyParam,
    twist: &Twist,
    max_steps: usize,
    rng: &mut SeededRng,
) -> Result<f64> {
    let mdp = SailingMdp {
        world: *world,
        initial_wind: Direction::ALL[rng.random_range(0..8)],
    };
    let log_weight = Cell::new(0.0);
    let boat = |s: &SailingState, rng: &mut SeededRng| {
        let base = leg_distribution(world, s, theta, LegWeighting::DistanceOnly);
        let scores: Vec<f64> = base
            .legs
            .iter()
            .zip(&base.probs)
            .map(|(h, p)| {
                let (cost, _) = world.leg_cost(s, *h).expect("feasible leg");
                let look = log_sum_exp(successors(world, s, *h).iter().map(|(_, lp, next)| lp + twist.log_psi(next)));
                p.ln() - cost + look
            })
            .collect();
        let log_z = log_sum_exp(scores.iter().copied());
        let log_q: Vec<f64> = scores.iter().map(|x| x - log_z).collect();
        log_weight.set(log_weight.get() + log_z);
        base.legs[draw_index(&log_q, rng)]
    };
    let wind = |s: &SailingState, heading: Option<&Direction>, rng: &mut SeededRng| {
        let next = successors(world, s, *heading.expect("sequential turns"));
        let scores: Vec<f64> = next.iter().map(|(_, lp, n)| lp + twist.log_psi(n)).collect();
        let log_z = log_sum_exp(scores.iter().copied());
        let log_q: Vec<f64> = scores.iter().map(|x| x - log_z).collect();
        let i = draw_index(&log_q, rng);
        log_weight.set(log_weight.get() - twist.log_psi(&next[i].2));
        next[i].0
    };
    let unrolled = unroll(&mdp, boat, wind, Turn::Sequential, max_steps, rng)?;
    Ok(if unrolled.truncated {
        f64::NEG_INFINITY
    } else {
        log_weight.get()
    })
}

/// Estimate of `log E_θ[exp(−travel cost)]` from `n_inner` voyages: the log
/// of an unbiased estimate of the likelihood.
pub fn estimate_log_likelihood(
    world: &SailingWorld,
    theta: PolicyParam,
    n_inner: usize,
    twist: &Twist,
    max_steps: usize,
    rng: &mut SeededRng,
) -> f64 {
    let seeds: Vec<u64> = (0..n_inner).map(|_| rng.random()).collect();
    let log_weights: Vec<f64> = seeds
        .par_iter()
        .map(|s| weighted_voyage(world, theta, twist, max_steps, &mut rng_from_seed(*s)).unwrap_or(f64::NEG_INFINITY))
        .collect();
    log_mean_exp(&log_weights)
}

/// Builds the default look-ahead for `world`.
pub fn value_twist(world: &SailingWorld, strength: f64) -> Result<Twist> {
    if strength == 0.0 {
        return Ok(Twist::none());
    }
    let table = value_iteration(world, DEFAULT_TOLERANCE, DEFAULT_MAX_SWEEPS)?;
    Ok(Twist::from_values(Arc::new(table), strength))
}

/// Pseudo-marginal MH over `log θ`.
pub fn infer_theta(world: &SailingWorld, config: &InferConfig) -> Result<PosteriorSamples<f64>> {
    if !(config.log_theta_min < config.log_theta_max) {
        return Err(Error::InvalidArgument(format!(
            "empty prior support [{}, {}]",
            config.log_theta_min, config.log_theta_max
        )));
    }
    if !(config.proposal_scale > 0.0) {
        return Err(Error::InvalidArgument("proposal scale must be positive".into()));
    }
    let max_steps = config.max_steps.unwrap_or_else(|| default_max_steps(world));
    let twist = value_twist(world, config.twist)?;
    let (lo, hi) = (config.log_theta_min, config.log_theta_max);
    let log_prior = |lt: &f64| if (lo..=hi).contains(lt) { 0.0 } else { f64::NEG_INFINITY };
    let estimate = |lt: &f64, n_inner: usize, rng: &mut SeededRng| match PolicyParam::new(lt.exp()) {
        Ok(theta) => estimate_log_likelihood(world, theta, n_inner, &twist, max_steps, rng),
        Err(_) => f64::NEG_INFINITY,
    };
    pseudo_marginal_mh(
        estimate,
        log_prior,
        gaussian_random_walk(config.proposal_scale),
        config.init_log_theta,
        config.n_inner,
        ChainConfig::retaining(config.n_samples, config.burn_in, config.seed),
    )
}

/// Policy parameters from samples of `log θ`.
pub fn thetas_from_log(samples: &PosteriorSamples<f64>) -> Result<Vec<PolicyParam>> {
    samples.values.iter().map(|lt| PolicyParam::new(lt.exp())).collect()
}

/// Posterior-integrated inferred policy.
pub fn inferred_policy(samples: &PosteriorSamples<f64>) -> Result<SailingPolicy> {
    Ok(SailingPolicy::Posterior {
        thetas: Arc::new(thetas_from_log(samples)?),
        weighting: LegWeighting::CostConditioned,
    })
}

/// Inferred policy at the posterior mean of `log θ`.
pub fn point_estimate_policy(samples: &PosteriorSamples<f64>) -> Result<SailingPolicy> {
    Ok(SailingPolicy::Softmax {
        theta: PolicyParam::new(samples.mean().exp())?,
        weighting: LegWeighting::CostConditioned,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TravelCostRow {
    pub size: u32,
    pub optimal: f64,
    pub greedy: PolicyEvaluation,
    pub inferred: PolicyEvaluation,
    pub acceptance_rate: f64,
}

/// Optimal, greedy and inferred travel cost for each lake size.
pub fn travel_cost_table(
    sizes: &[u32],
    infer: &InferConfig,
    n_rollouts: usize,
    seed: u64,
) -> Result<Vec<TravelCostRow>> {
    sizes
        .iter()
        .map(|&size| {
            let world = SailingWorld::new(size)?;
            let max_steps = infer.max_steps.unwrap_or_else(|| default_max_steps(&world));
            let optimal = value_iteration(&world, DEFAULT_TOLERANCE, DEFAULT_MAX_SWEEPS)?.start_value();
            let greedy = evaluate_policy(&world, &SailingPolicy::Greedy, n_rollouts, max_steps, derive_seed(seed, 1))?;
            let cfg = InferConfig {
                seed: derive_seed(seed, 2),
                ..*infer
            };
            let samples = infer_theta(&world, &cfg)?;
            let inferred = evaluate_policy(&world, &inferred_policy(&samples)?, n_rollouts, max_steps, derive_seed(seed, 3))?;
            Ok(TravelCostRow {
                size,
                optimal,
                greedy,
                inferred,
                acceptance_rate: samples.acceptance_rate,
            })
        })
        .collect()
}
