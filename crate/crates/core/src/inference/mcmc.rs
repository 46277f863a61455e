//! Metropolis-Hastings kernels.
//!
//! Both kernels assume a symmetric proposal, so the acceptance probability is
//! `min(1, exp(Δ log-density))`. Every run owns a single [`SeededRng`] created
//! from the configured seed; proposals and likelihood estimates draw from it
//! in a fixed order, which makes a chain bit-reproducible.

use std::io::Write;

use rand::Rng;

use super::rng::{rng_from_seed, SeededRng};
use crate::error::{Error, Result};

pub const DEFAULT_BURN_IN_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    /// Total number of MH iterations, burn-in included.
    pub n_iters: usize,
    pub burn_in_fraction: f64,
    /// Exact number of discarded iterations; overrides the fraction.
    pub burn_in_count: Option<usize>,
    pub seed: u64,
}

impl ChainConfig {
    pub fn new(n_iters: usize, seed: u64) -> Self {
        Self {
            n_iters,
            burn_in_fraction: DEFAULT_BURN_IN_FRACTION,
            burn_in_count: None,
            seed,
        }
    }

    pub fn with_burn_in(mut self, fraction: f64) -> Self {
        self.burn_in_fraction = fraction;
        self
    }

    /// `n_samples` retained draws after `burn_in` discarded ones.
    pub fn retaining(n_samples: usize, burn_in: usize, seed: u64) -> Self {
        Self {
            n_iters: n_samples + burn_in,
            burn_in_fraction: 0.0,
            burn_in_count: Some(burn_in),
            seed,
        }
    }

    fn burn_in(&self) -> Result<usize> {
        if let Some(b) = self.burn_in_count {
            if b >= self.n_iters {
                return Err(Error::InvalidArgument(format!(
                    "{} iterations leave no samples after burn-in",
                    self.n_iters
                )));
            }
            return Ok(b);
        }
        if !(0.0..1.0).contains(&self.burn_in_fraction) {
            return Err(Error::InvalidArgument(format!(
                "burn-in fraction {} not in [0, 1)",
                self.burn_in_fraction
            )));
        }
        let burn_in = (self.n_iters as f64 * self.burn_in_fraction).floor() as usize;
        if self.n_iters == 0 || burn_in >= self.n_iters {
            return Err(Error::InvalidArgument(format!(
                "{} iterations leave no samples after burn-in",
                self.n_iters
            )));
        }
        Ok(burn_in)
    }
}

/// Retained states of a Markov chain together with run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSamples<S = f64> {
    pub values: Vec<S>,
    /// Fraction of accepted proposals over all iterations, burn-in included.
    pub acceptance_rate: f64,
    pub seed: u64,
    /// Number of discarded leading iterations.
    pub burn_in: usize,
    /// Candidates rejected because their likelihood estimate was not finite.
    pub nonfinite_rejections: usize,
}

impl<S> PosteriorSamples<S> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<T>(self, f: impl FnMut(S) -> T) -> PosteriorSamples<T> {
        PosteriorSamples {
            values: self.values.into_iter().map(f).collect(),
            acceptance_rate: self.acceptance_rate,
            seed: self.seed,
            burn_in: self.burn_in,
            nonfinite_rejections: self.nonfinite_rejections,
        }
    }
}

impl PosteriorSamples<f64> {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Empirical quantile by linear interpolation between order statistics.
    pub fn quantile(&self, q: f64) -> f64 {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
    }

    /// Writes `index,<column>` rows.
    pub fn write_csv<W: Write>(&self, out: W, column: &str) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", column])?;
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([i.to_string(), format!("{v}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Accept with probability `min(1, exp(delta))`.
fn accept(delta: f64, rng: &mut SeededRng) -> bool {
    if delta >= 0.0 {
        return true;
    }
    let u: f64 = rng.random();
    u.ln() < delta
}

/// Plain Metropolis-Hastings with a symmetric proposal.
pub fn mh_chain<S, T, P>(
    mut target_log_density: T,
    mut propose: P,
    init: S,
    config: ChainConfig,
) -> Result<PosteriorSamples<S>>
where
    S: Clone,
    T: FnMut(&S) -> f64,
    P: FnMut(&S, &mut SeededRng) -> S,
{
    let burn_in = config.burn_in()?;
    let mut rng = rng_from_seed(config.seed);

    let mut current = init;
    let mut current_lp = target_log_density(&current);
    if !current_lp.is_finite() {
        return Err(Error::NonFiniteInit(current_lp));
    }

    let mut values = Vec::with_capacity(config.n_iters - burn_in);
    let mut accepted = 0usize;
    for i in 0..config.n_iters {
        let candidate = propose(&current, &mut rng);
        let lp = target_log_density(&candidate);
        if !lp.is_nan() && accept(lp - current_lp, &mut rng) {
            current = candidate;
            current_lp = lp;
            accepted += 1;
        }
        if i >= burn_in {
            values.push(current.clone());
        }
    }

    Ok(PosteriorSamples {
        values,
        acceptance_rate: accepted as f64 / config.n_iters as f64,
        seed: config.seed,
        burn_in,
        nonfinite_rejections: 0,
    })
}

/// Pseudo-marginal Metropolis-Hastings.
///
/// `estimate_log_likelihood(state, n_inner, rng)` must return the log of an
/// unbiased, nonnegative estimate of the likelihood; that property is the
/// caller's responsibility. The estimate is computed once per proposed state
/// and carried along with the current state, never refreshed. A non-finite
/// estimate rejects the candidate and is counted in
/// [`PosteriorSamples::nonfinite_rejections`].
pub fn pseudo_marginal_mh<S, E, L, P>(
    mut estimate_log_likelihood: E,
    mut log_prior: L,
    mut propose: P,
    init: S,
    n_inner: usize,
    config: ChainConfig,
) -> Result<PosteriorSamples<S>>
where
    S: Clone,
    E: FnMut(&S, usize, &mut SeededRng) -> f64,
    L: FnMut(&S) -> f64,
    P: FnMut(&S, &mut SeededRng) -> S,
{
    if n_inner == 0 {
        return Err(Error::InvalidArgument("n_inner must be at least 1".into()));
    }
    let burn_in = config.burn_in()?;
    let mut rng = rng_from_seed(config.seed);

    let mut current = init;
    let mut current_prior = log_prior(&current);
    let mut current_ll = estimate_log_likelihood(&current, n_inner, &mut rng);
    if !(current_prior + current_ll).is_finite() {
        return Err(Error::NonFiniteInit(current_prior + current_ll));
    }

    let mut values = Vec::with_capacity(config.n_iters - burn_in);
    let mut accepted = 0usize;
    let mut nonfinite = 0usize;
    for i in 0..config.n_iters {
        let candidate = propose(&current, &mut rng);
        let prior = log_prior(&candidate);
        // Zero prior mass: skip the (expensive) likelihood estimate.
        if prior.is_finite() {
            let ll = estimate_log_likelihood(&candidate, n_inner, &mut rng);
            if !ll.is_finite() {
                nonfinite += 1;
            } else if accept(prior + ll - current_prior - current_ll, &mut rng) {
                current = candidate;
                current_prior = prior;
                current_ll = ll;
                accepted += 1;
            }
        }
        if i >= burn_in {
            values.push(current.clone());
        }
    }

    Ok(PosteriorSamples {
        values,
        acceptance_rate: accepted as f64 / config.n_iters as f64,
        seed: config.seed,
        burn_in,
        nonfinite_rejections: nonfinite,
    })
}

/// Random-walk proposal adding `N(0, scale²)` noise.
pub fn gaussian_random_walk(scale: f64) -> impl FnMut(&f64, &mut SeededRng) -> f64 {
    use rand_distr::{Distribution, Normal};
    let normal = Normal::new(0.0, scale).expect("finite positive proposal scale");
    move |x: &f64, rng: &mut SeededRng| x + normal.sample(rng)
}

/// Proposal for a binary state: always flip.
pub fn flip(x: &bool, _rng: &mut SeededRng) -> bool {
    !*x
}
