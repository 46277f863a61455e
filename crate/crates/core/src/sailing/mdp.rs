//! The sailing problem as a two-agent MDP: the boat picks a heading, the wind
//! (a neutral agent) picks a shift, and the state moves deterministically.

use std::fmt;

use super::world::{Direction, SailingState, SailingWorld, WindShift};
use crate::error::{Error, Result};
use crate::mdp::TwoAgentMdp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SailingAction {
    pub heading: Direction,
    pub shift: WindShift,
}

impl fmt::Display for SailingAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{:+}", self.heading, self.shift.ticks())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SailingMdp {
    pub world: SailingWorld,
    pub initial_wind: Direction,
}

impl TwoAgentMdp for SailingMdp {
    type State = SailingState;
    type Action1 = Direction;
    type Action2 = WindShift;
    type Action = SailingAction;

    fn initial(&self) -> SailingState {
        self.world.initial_state(self.initial_wind)
    }

    fn is_terminal(&self, s: &SailingState) -> bool {
        self.world.is_goal(s)
    }

    fn compose(&self, heading: &Direction, shift: &WindShift) -> SailingAction {
        SailingAction {
            heading: *heading,
            shift: *shift,
        }
    }

    /// Sails the leg under the current wind, then shifts the wind.
    fn transition(&self, s: &SailingState, a: &SailingAction) -> Result<SailingState> {
        let (_, tack) = self.world.leg_cost(s, a.heading).map_err(|e| Error::UndefinedTransition {
            state: s.to_string(),
            action: format!("{a} ({e})"),
        })?;
        Ok(SailingState {
            position: s.position.step(a.heading),
            wind: s.wind.rotate(a.shift.ticks()),
            tack,
        })
    }
}

/// Sum of leg costs along a trajectory.
pub fn trajectory_cost(world: &SailingWorld, states: &[SailingState], actions: &[SailingAction]) -> Result<f64> {
    states
        .iter()
        .zip(actions)
        .map(|(s, a)| world.leg_cost(s, a.heading).map(|(c, _)| c))
        .sum()
}
