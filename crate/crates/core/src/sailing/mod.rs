//! A boat crossing a square lake under a randomly shifting wind.
//!
//! The boat travels from the south-west to the north-east corner. Each leg
//! costs according to its angle to the wind, switching tack costs a delay,
//! and the wind rotates by at most one tick per leg.

pub mod dp;
pub mod infer;
pub mod mdp;
pub mod policy;
pub mod rollout;
pub mod world;

pub use dp::{optimal_expected_cost, value_iteration, ValueTable};
pub use infer::{
    estimate_log_likelihood, infer_theta, inferred_policy, point_estimate_policy, travel_cost_table, InferConfig,
    TravelCostRow,
};
pub use mdp::{trajectory_cost, SailingAction, SailingMdp};
pub use policy::{greedy_policy, leg_distribution, policy_log_prob, LegDistribution, LegWeighting, PolicyParam};
pub use rollout::{default_max_steps, evaluate_policy, rollout, PolicyEvaluation, SailingPolicy, Voyage};
pub use world::{
    relative_point_of_sail, CostTable, Direction, LakeSpec, PointOfSail, Position, SailingState, SailingWorld, Tack,
    WindModel, WindShift,
};
