//! Exact expected cost-to-go by value iteration.
//!
//! States are `(x, y, wind, tack)`. The boat picks a leg under the current
//! wind, pays the leg cost, and the wind then shifts. Sweeps are synchronous
//! (each reads only the previous value table), so the Bellman operator is a
//! sup-norm non-expansion and the residual sequence never increases.

use rayon::prelude::*;

use super::world::{Direction, Position, SailingState, SailingWorld, Tack};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_SWEEPS: usize = 200_000;

#[derive(Debug, Clone, Copy)]
struct Edge {
    heading: Direction,
    cost: f64,
    /// Index of `(next position, current wind, new tack)`; the wind shift is
    /// applied when reading the value table.
    next: u32,
}

/// Converged value table and the greedy-in-value (optimal) policy.
#[derive(Debug, Clone)]
pub struct ValueTable {
    pub world: SailingWorld,
    values: Vec<f64>,
    policy: Vec<Option<Direction>>,
    /// Max-norm change of each sweep.
    pub residuals: Vec<f64>,
}

fn index(size: u32, p: Position, wind: Direction, tack: Tack) -> usize {
    ((p.x as usize * size as usize + p.y as usize) * 8 + wind.index() as usize) * 3 + tack.index()
}

fn state_of(size: u32, i: usize) -> SailingState {
    let tack = Tack::ALL[i % 3];
    let wind = Direction::ALL[(i / 3) % 8];
    let cell = i / 24;
    let n = size as usize;
    SailingState {
        position: Position::new((cell / n) as i32, (cell % n) as i32),
        wind,
        tack,
    }
}

impl ValueTable {
    pub fn value(&self, s: &SailingState) -> f64 {
        self.values[index(self.world.lake.size, s.position, s.wind, s.tack)]
    }

    /// Optimal heading; `None` at the goal.
    pub fn action(&self, s: &SailingState) -> Option<Direction> {
        self.policy[index(self.world.lake.size, s.position, s.wind, s.tack)]
    }

    /// Expected cost from the start, averaged over a uniform initial wind.
    pub fn start_value(&self) -> f64 {
        Direction::ALL
            .iter()
            .map(|w| self.value(&self.world.initial_state(*w)))
            .sum::<f64>()
            / 8.0
    }

    pub fn sweeps(&self) -> usize {
        self.residuals.len()
    }
}

/// Runs synchronous value iteration until the max residual drops below
/// `tolerance`.
pub fn value_iteration(world: &SailingWorld, tolerance: f64, max_sweeps: usize) -> Result<ValueTable> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tolerance} must be positive")));
    }
    world.costs.validate()?;
    let size = world.lake.size;
    let n_states = size as usize * size as usize * 24;

    let edges: Vec<Vec<Edge>> = (0..n_states)
        .into_par_iter()
        .map(|i| {
            let s = state_of(size, i);
            if world.is_goal(&s) {
                return Vec::new();
            }
            world
                .feasible_legs(&s)
                .into_iter()
                .map(|h| {
                    let (cost, tack) = world.leg_cost(&s, h).expect("feasible leg");
                    Edge {
                        heading: h,
                        cost,
                        next: index(size, s.position.step(h), s.wind, tack) as u32,
                    }
                })
                .collect()
        })
        .collect();

    let shifts = world.wind.shifts();
    let expected_next = |v: &[f64], next: usize| -> f64 {
        let base = next - next % 24;
        let tack = next % 3;
        let wind = (next / 3) % 8;
        shifts
            .iter()
            .map(|(shift, p)| {
                let w = (wind as i32 + shift.ticks()).rem_euclid(8) as usize;
                p * v[base + w * 3 + tack]
            })
            .sum()
    };

    let mut values = vec![0.0; n_states];
    let mut residuals = Vec::new();
    loop {
        let new_values: Vec<f64> = edges
            .par_iter()
            .map(|legs| {
                legs.iter()
                    .map(|e| e.cost + expected_next(&values, e.next as usize))
                    .fold(f64::INFINITY, f64::min)
            })
            .map(|v| if v.is_infinite() { 0.0 } else { v })
            .collect();
        let residual = values
            .par_iter()
            .zip(&new_values)
            .map(|(a, b)| (a - b).abs())
            .reduce(|| 0.0, f64::max);
        values = new_values;
        residuals.push(residual);
        if residual < tolerance {
            break;
        }
        if residuals.len() >= max_sweeps {
            return Err(Error::NoConvergence {
                iterations: residuals.len(),
                residual,
            });
        }
    }

    let policy = edges
        .par_iter()
        .map(|legs| {
            legs.iter()
                .map(|e| (e.cost + expected_next(&values, e.next as usize), e.heading))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                .map(|(_, h)| h)
        })
        .collect();

    Ok(ValueTable {
        world: *world,
        values,
        policy,
        residuals,
    })
}

/// Optimal expected travel cost from the start corner.
pub fn optimal_expected_cost(world: &SailingWorld, tolerance: f64) -> Result<f64> {
    Ok(value_iteration(world, tolerance, DEFAULT_MAX_SWEEPS)?.start_value())
}
