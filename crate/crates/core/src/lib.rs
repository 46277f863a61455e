//! Planning as inference with probabilistic preferences.
//!
//! Preferences are stated as probabilities: how often an agent would make a
//! choice if it knew the outcome. Decisions then follow from ordinary
//! Bayesian conditioning, with *stochastic conditioning* on the anticipated
//! behavior of other agents or of the environment.
//!
//! - [`inference`]: seeded randomness, stochastic conditioning, plain and
//!   pseudo-marginal Metropolis-Hastings.
//! - [`fable`]: two agents choosing between two bars, with depth-bounded
//!   reasoning about each other, exact and Monte-Carlo.
//! - [`mistakes`]: two flawed formulations and what they really achieve.
//! - [`mdp`]: deterministic-transition two-agent decision processes.
//! - [`sailing`]: the sailing problem, a parametric stochastic policy and its
//!   pseudo-marginal inference, plus greedy and dynamic-programming baselines.
//! - [`cli`]: the reproducible, CSV-emitting command layer behind the
//!   `probpref` binary.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod cli;
pub mod error;
pub mod fable;
pub mod inference;
pub mod mdp;
pub mod mistakes;
pub mod sailing;

pub use error::{Error, Result};
