//! Conditioning on a distribution instead of a value.
//!
//! A coin of unknown bias `x` is "observed" to land heads with frequency 0.7.
//! The log-weight of `x` is `0.7 log x + 0.3 log(1 − x)`, which peaks at
//! `x = 0.7`. A grid over `x` is sampled by Metropolis-Hastings.

use probpref::inference::{mh_chain, stochastic_log_weight, ChainConfig, FiniteDistribution};
use rand::Rng;

fn main() -> probpref::Result<()> {
    let observed = FiniteDistribution::bernoulli(0.7)?;
    let grid: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();

    let log_weight = |i: &usize| {
        let x = grid[*i];
        stochastic_log_weight(|heads: &bool| Ok(if *heads { x.ln() } else { (1.0 - x).ln() }), &observed)
            .expect("finite")
    };
    let best = (0..grid.len()).max_by(|a, b| log_weight(a).total_cmp(&log_weight(b))).unwrap();
    println!("argmax of the log-weight: x = {}", grid[best]);

    // scale the weight by 50 "observations" to get a peaked target
    let chain = mh_chain(
        |i: &usize| 50.0 * log_weight(i),
        |i: &usize, rng| (*i as i64 + rng.random_range(-3..=3)).clamp(0, 98) as usize,
        49,
        ChainConfig::new(20_000, 3),
    )?;
    let mean = chain.values.iter().map(|i| grid[*i]).sum::<f64>() / chain.len() as f64;
    println!("posterior mean {mean:.3}, acceptance {:.2}", chain.acceptance_rate);
    Ok(())
}
