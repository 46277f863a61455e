//! Randomness, finite distributions, stochastic conditioning and MCMC.

pub mod dist;
pub mod mcmc;
pub mod rng;

pub use dist::{stochastic_log_weight, FiniteDistribution};
pub use mcmc::{
    flip, gaussian_random_walk, mh_chain, pseudo_marginal_mh, ChainConfig, PosteriorSamples,
    DEFAULT_BURN_IN_FRACTION,
};
pub use rng::{derive_seed, rng_from_seed, SeededRng};

/// Logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// `log(mean(exp(xs)))`, stable for large negative inputs. `-∞` entries are
/// zero-weight terms; an all-`-∞` input yields `-∞`.
pub fn log_mean_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || xs.is_empty() {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|x| (x - max).exp()).sum();
    max + (s / xs.len() as f64).ln()
}
