use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("target log-density is not finite at the initial state ({0})")]
    NonFiniteInit(f64),

    #[error("evaluator failed on outcome {outcome}: {reason}")]
    Evaluator { outcome: String, reason: String },

    #[error("transition undefined from state {state} under action {action}")]
    UndefinedTransition { state: String, action: String },

    #[error("invalid trajectory at step {step}: {reason}")]
    InvalidTrajectory { step: usize, reason: String },

    #[error("infeasible leg: {0}")]
    InfeasibleLeg(String),

    #[error("value iteration did not converge after {iterations} sweeps (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
