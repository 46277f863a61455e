//! Two agents choosing between two bars, each with a probabilistic
//! preference for a bar and for meeting (or avoiding) the other.
//!
//! An agent at deliberation depth `d` conditions its prior choice on the
//! other agent's choice *distribution* at depth `d − 1`. The exact recursion
//! lives in [`agent`], the sampling-based one in [`mc`].

pub mod agent;
pub mod episode;
pub mod learn;
pub mod mc;
pub mod mdp;
pub mod presets;
pub mod sweep;

pub use agent::{
    analytical_choice, analytical_sequence, meeting_log_likelihood, posterior_given_belief, softmax_choice,
    AgentPreferences, AnalyticalModel, Bar, ChoiceMethod, ChoicePosterior,
};
pub use episode::{simulate_episode, simulate_episodes, EpisodeOutcome};
pub use learn::{infer_meeting_preference, LearnConfig, LogOddsPrior, PreferenceBelief};
pub use mc::{mc_choice, McChoiceModel};
pub use presets::Preset;
pub use sweep::{count_ordered, fable_sweep, paired_learning, LogOddsPair, SweepRow};
