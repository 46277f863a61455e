//! The six preference configurations studied for the two-bar fable.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::agent::AgentPreferences;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Same bar preference, both want to meet: 0.55/0.9 each.
    MeetSymmetric,
    /// Different bar preferences, both want to meet: 0.75 vs 0.45, pm 0.75.
    MeetDifferentBars,
    /// Bob chases Alice mildly: pm 0.25 (Alice) and 0.75 (Bob).
    ChaseMild,
    /// Bob chases Alice strongly: pm 0.1 (Alice) and 0.9 (Bob).
    ChaseStrong,
    /// Mutual mild avoidance: pm 0.25 each.
    AvoidMild,
    /// Mutual strong avoidance: pm 0.05 each.
    AvoidStrong,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::MeetSymmetric,
        Preset::MeetDifferentBars,
        Preset::ChaseMild,
        Preset::ChaseStrong,
        Preset::AvoidMild,
        Preset::AvoidStrong,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::MeetSymmetric => "meet-symmetric",
            Preset::MeetDifferentBars => "meet-different-bars",
            Preset::ChaseMild => "chase-mild",
            Preset::ChaseStrong => "chase-strong",
            Preset::AvoidMild => "avoid-mild",
            Preset::AvoidStrong => "avoid-strong",
        }
    }

    /// `(p1, pm)` for Alice and Bob.
    fn parameters(self) -> ((f64, f64), (f64, f64)) {
        match self {
            Preset::MeetSymmetric => ((0.55, 0.9), (0.55, 0.9)),
            Preset::MeetDifferentBars => ((0.75, 0.75), (0.45, 0.75)),
            Preset::ChaseMild => ((0.55, 0.25), (0.55, 0.75)),
            Preset::ChaseStrong => ((0.55, 0.1), (0.55, 0.9)),
            Preset::AvoidMild => ((0.55, 0.25), (0.55, 0.25)),
            Preset::AvoidStrong => ((0.55, 0.05), (0.55, 0.05)),
        }
    }

    pub fn agents(self) -> (AgentPreferences, AgentPreferences) {
        let ((a1, am), (b1, bm)) = self.parameters();
        (
            AgentPreferences::new("Alice", a1, am).expect("preset probabilities are valid"),
            AgentPreferences::new("Bob", b1, bm).expect("preset probabilities are valid"),
        )
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                Error::InvalidArgument(format!("unknown preset '{s}' (known: {})", known.join(", ")))
            })
    }
}
