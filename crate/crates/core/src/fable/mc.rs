//! Monte-Carlo counterpart of the exact recursion.
//!
//! Each level runs a Metropolis-Hastings chain over the agent's binary choice,
//! targeting the prior times the stochastically conditioned meeting
//! likelihood. The belief about the other agent is the empirical frequency of
//! the other agent's chain one level down. At depth 0 the belief is the
//! uninformative `q = 0.5`, under which the meeting term is constant and the
//! chain samples the prior.

use std::collections::HashMap;

use rand::Rng;

use super::agent::{meeting_log_likelihood, AgentPreferences, ChoiceMethod, ChoicePosterior};
use crate::error::{Error, Result};
use crate::inference::{derive_seed, flip, mh_chain, rng_from_seed, ChainConfig, DEFAULT_BURN_IN_FRACTION};

pub const MIN_MC_ITERS: usize = 100;

type Key = ((u64, u64), (u64, u64), usize);

/// Memoized recursive estimator. One instance is one reproducible run:
/// every chain's seed is derived from the root seed and the
/// `(me, other, depth)` key, so shared sub-problems are computed once and the
/// result does not depend on query order.
#[derive(Debug)]
pub struct McChoiceModel {
    root_seed: u64,
    n_iters: usize,
    burn_in_fraction: f64,
    cache: HashMap<Key, ChoicePosterior>,
}

impl McChoiceModel {
    pub fn new(n_iters: usize, seed: u64) -> Result<Self> {
        if n_iters < MIN_MC_ITERS {
            return Err(Error::InvalidArgument(format!(
                "at least {MIN_MC_ITERS} iterations required, got {n_iters}"
            )));
        }
        Ok(Self {
            root_seed: seed,
            n_iters,
            burn_in_fraction: DEFAULT_BURN_IN_FRACTION,
            cache: HashMap::new(),
        })
    }

    pub fn with_burn_in(mut self, fraction: f64) -> Self {
        self.burn_in_fraction = fraction;
        self
    }

    fn chain_seed(&self, key: &Key) -> u64 {
        let ((a, b), (c, d), depth) = *key;
        [a, b, c, d, depth as u64]
            .into_iter()
            .fold(self.root_seed, derive_seed)
    }

    pub fn choice(&mut self, me: &AgentPreferences, other: &AgentPreferences, depth: usize) -> Result<ChoicePosterior> {
        let key: Key = ((me.p1.to_bits(), me.pm.to_bits()), (other.p1.to_bits(), other.pm.to_bits()), depth);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }

        let q = if depth > 0 {
            self.choice(other, me, depth - 1)?.p_first
        } else {
            0.5
        };

        let seed = self.chain_seed(&key);
        let init = rng_from_seed(derive_seed(seed, u64::MAX)).random_bool(me.p1);
        let log_prior = (me.p1.ln(), (1.0 - me.p1).ln());
        let target = |i1: &bool| {
            let prior = if *i1 { log_prior.0 } else { log_prior.1 };
            prior + meeting_log_likelihood(me, q, *i1)
        };
        let config = ChainConfig::new(self.n_iters, seed).with_burn_in(self.burn_in_fraction);
        let samples = mh_chain(target, flip, init, config)?;

        let n = samples.len();
        let p = samples.values.iter().filter(|b| **b).count() as f64 / n as f64;
        let posterior = ChoicePosterior {
            p_first: p,
            depth,
            method: ChoiceMethod::MonteCarlo,
            n_iters: Some(n),
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
        };
        self.cache.insert(key, posterior.clone());
        Ok(posterior)
    }
}

pub fn mc_choice(
    me: &AgentPreferences,
    other: &AgentPreferences,
    depth: usize,
    n_iters: usize,
    seed: u64,
) -> Result<ChoicePosterior> {
    McChoiceModel::new(n_iters, seed)?.choice(me, other, depth)
}
