//! Depth sweeps and the paired preference-learning experiment.

use serde::Serialize;

use super::agent::{AgentPreferences, AnalyticalModel, Bar, ChoiceMethod};
use super::learn::{infer_meeting_preference, LearnConfig};
use super::mc::McChoiceModel;
use crate::error::Result;
use crate::inference::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub agent: String,
    pub depth: usize,
    pub p_first: f64,
    pub method: ChoiceMethod,
    pub stderr: f64,
    pub seed: u64,
}

/// Exact and Monte-Carlo choice probabilities for both agents at depths
/// `0..=max_depth`. Pass `n_iters = None` to skip the Monte-Carlo rows.
pub fn fable_sweep(
    alice: &AgentPreferences,
    bob: &AgentPreferences,
    max_depth: usize,
    n_iters: Option<usize>,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    let mut exact = AnalyticalModel::new();
    let mut mc = n_iters.map(|n| McChoiceModel::new(n, seed)).transpose()?;
    for (me, other) in [(alice, bob), (bob, alice)] {
        for depth in 0..=max_depth {
            rows.push(SweepRow {
                agent: me.name.clone(),
                depth,
                p_first: exact.p_first(me, other, depth),
                method: ChoiceMethod::Analytical,
                stderr: 0.0,
                seed,
            });
            if let Some(mc) = mc.as_mut() {
                let c = mc.choice(me, other, depth)?;
                rows.push(SweepRow {
                    agent: me.name.clone(),
                    depth,
                    p_first: c.p_first,
                    method: ChoiceMethod::MonteCarlo,
                    stderr: c.stderr,
                    seed,
                });
            }
        }
    }
    Ok(rows)
}

/// One posterior draw from each of two observation histories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogOddsPair {
    pub index: usize,
    pub first: f64,
    pub second: f64,
}

/// Runs the learner on two observation histories and pairs the samples by
/// index. Each history gets its own chain seed derived from `config.seed`.
pub fn paired_learning(
    me: &AgentPreferences,
    history_a: &[Bar],
    history_b: &[Bar],
    config: &LearnConfig,
) -> Result<Vec<LogOddsPair>> {
    let cfg_a = LearnConfig { seed: derive_seed(config.seed, 1), ..config.clone() };
    let cfg_b = LearnConfig { seed: derive_seed(config.seed, 2), ..config.clone() };
    let a = infer_meeting_preference(me, history_a, &cfg_a)?;
    let b = infer_meeting_preference(me, history_b, &cfg_b)?;
    Ok(a.log_odds_samples
        .values
        .iter()
        .zip(&b.log_odds_samples.values)
        .enumerate()
        .map(|(index, (&first, &second))| LogOddsPair { index, first, second })
        .collect())
}

/// Number of pairs with `first > second`, strictly.
pub fn count_ordered(pairs: &[LogOddsPair]) -> usize {
    pairs.iter().filter(|p| p.first > p.second).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_shape() {
        let a = AgentPreferences::new("Alice", 0.55, 0.9).unwrap();
        let b = AgentPreferences::new("Bob", 0.55, 0.9).unwrap();
        let rows = fable_sweep(&a, &b, 3, Some(200), 1).unwrap();
        assert_eq!(rows.len(), 2 * 4 * 2);
        assert_eq!(rows[0].p_first, 0.55);
        let exact_only = fable_sweep(&a, &b, 3, None, 1).unwrap();
        assert_eq!(exact_only.len(), 8);
        assert!(exact_only.iter().all(|r| r.method == ChoiceMethod::Analytical));
    }
}
