//! Learning the other agent's meeting preference from its observed choices.
//!
//! The latent variable is the other agent's meeting log-odds
//! `log(pm / (1 − pm))` under a normal prior. Each observed bar is scored by
//! the other agent's exact choice probability at the configured depth, with
//! the learner itself as the other agent's counterpart.

use serde::{Deserialize, Serialize};

use super::agent::{AgentPreferences, AnalyticalModel, Bar};
use crate::error::{Error, Result};
use crate::inference::{gaussian_random_walk, mh_chain, ChainConfig, PosteriorSamples};

/// Normal prior on the meeting log-odds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogOddsPrior {
    pub location: f64,
    pub scale: f64,
}

impl Default for LogOddsPrior {
    fn default() -> Self {
        Self {
            location: 0.0,
            scale: 5.0,
        }
    }
}

impl LogOddsPrior {
    pub fn log_density(&self, x: f64) -> f64 {
        let z = (x - self.location) / self.scale;
        -0.5 * z * z - self.scale.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnConfig {
    /// Deliberation depth of the observed agent's choice model.
    pub depth: usize,
    pub prior: LogOddsPrior,
    /// Believed bar prior of the observed agent; `None` uses the learner's own.
    pub other_p1: Option<f64>,
    /// Number of retained (thinned) posterior samples.
    pub n_samples: usize,
    /// MH iterations per retained sample.
    pub thin: usize,
    pub proposal_scale: f64,
    pub seed: u64,
}

impl Default for LearnConfig {
    fn default() -> Self {
        Self {
            depth: 2,
            prior: LogOddsPrior::default(),
            other_p1: None,
            n_samples: 100,
            thin: 20,
            proposal_scale: 2.0,
            seed: 0,
        }
    }
}

/// Posterior over the other agent's meeting log-odds.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceBelief {
    pub log_odds_samples: PosteriorSamples,
    pub prior: LogOddsPrior,
}

impl PreferenceBelief {
    /// Posterior probability that the other agent wants to meet (`pm > 0.5`).
    pub fn prob_wants_to_meet(&self) -> f64 {
        let s = &self.log_odds_samples.values;
        s.iter().filter(|x| **x > 0.0).count() as f64 / s.len() as f64
    }
}

/// Log-likelihood of the observed bars given the other agent's meeting log-odds.
pub fn observation_log_likelihood(
    me: &AgentPreferences,
    other_p1: f64,
    observed: &[Bar],
    depth: usize,
    log_odds: f64,
) -> f64 {
    let Ok(other) = AgentPreferences::from_meeting_log_odds("other", other_p1, log_odds) else {
        return f64::NEG_INFINITY;
    };
    let p = AnalyticalModel::new().p_first(&other, me, depth);
    observed
        .iter()
        .map(|b| if b.is_first() { p.ln() } else { (1.0 - p).ln() })
        .sum()
}

pub fn infer_meeting_preference(
    me: &AgentPreferences,
    observed: &[Bar],
    config: &LearnConfig,
) -> Result<PreferenceBelief> {
    if observed.is_empty() {
        return Err(Error::InvalidArgument("no observed choices".into()));
    }
    if !(config.prior.scale > 0.0 && config.prior.scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("prior scale {}", config.prior.scale)));
    }
    if config.n_samples == 0 || config.thin == 0 {
        return Err(Error::InvalidArgument("n_samples and thin must be positive".into()));
    }
    let other_p1 = config.other_p1.unwrap_or(me.p1);
    let prior = config.prior;
    let target =
        |x: &f64| prior.log_density(*x) + observation_log_likelihood(me, other_p1, observed, config.depth, *x);

    // A burn-in of one tenth of the run, then `thin` iterations per sample.
    let kept = config.n_samples * config.thin;
    let total = kept + kept / 9 + 1;
    let burn_fraction = (total - kept) as f64 / total as f64;
    let chain = mh_chain(
        target,
        gaussian_random_walk(config.proposal_scale),
        prior.location,
        ChainConfig::new(total, config.seed).with_burn_in(burn_fraction),
    )?;
    let mut thinned = chain.clone();
    let offset = chain.values.len() - kept;
    thinned.values = chain.values[offset..]
        .iter()
        .step_by(config.thin)
        .copied()
        .collect();
    debug_assert_eq!(thinned.values.len(), config.n_samples);
    Ok(PreferenceBelief {
        log_odds_samples: thinned,
        prior,
    })
}
