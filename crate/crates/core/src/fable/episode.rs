use rand::Rng;
use serde::{Deserialize, Serialize};

use super::agent::{AgentPreferences, AnalyticalModel, Bar};
use crate::inference::{rng_from_seed, SeededRng};

/// Realized bar choices of one evening.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    pub choice_a: Bar,
    pub choice_b: Bar,
    pub met: bool,
}

impl EpisodeOutcome {
    pub fn new(choice_a: Bar, choice_b: Bar) -> Self {
        Self {
            choice_a,
            choice_b,
            met: choice_a == choice_b,
        }
    }
}

pub(crate) fn draw_bar(p_first: f64, rng: &mut SeededRng) -> Bar {
    if rng.random::<f64>() < p_first {
        Bar::First
    } else {
        Bar::Second
    }
}

/// Both agents deliberate to `depth` and then choose independently from
/// their exact posteriors.
pub fn simulate_episode(a: &AgentPreferences, b: &AgentPreferences, depth: usize, seed: u64) -> EpisodeOutcome {
    let mut model = AnalyticalModel::new();
    let pa = model.p_first(a, b, depth);
    let pb = model.p_first(b, a, depth);
    let mut rng = rng_from_seed(seed);
    let choice_a = draw_bar(pa, &mut rng);
    let choice_b = draw_bar(pb, &mut rng);
    EpisodeOutcome::new(choice_a, choice_b)
}

/// Many episodes from one stream.
pub fn simulate_episodes(
    a: &AgentPreferences,
    b: &AgentPreferences,
    depth: usize,
    n: usize,
    seed: u64,
) -> Vec<EpisodeOutcome> {
    let mut model = AnalyticalModel::new();
    let pa = model.p_first(a, b, depth);
    let pb = model.p_first(b, a, depth);
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| {
            let choice_a = draw_bar(pa, &mut rng);
            let choice_b = draw_bar(pb, &mut rng);
            EpisodeOutcome::new(choice_a, choice_b)
        })
        .collect()
}
