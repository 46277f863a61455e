//! Command-line front end.
//!
//! Every output starts with a `# probpref <version> <subcommand> <params>`
//! line (for JSON, the same information sits under `"metadata"`), then the
//! rows. Identical arguments give byte-identical output.
//!
//! Exit codes: 0 success, 2 usage error, 1 runtime error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::fable::{count_ordered, fable_sweep, paired_learning, AgentPreferences, Bar, LearnConfig, Preset};
use crate::inference::derive_seed;
use crate::mistakes::{future_as_present_report, single_sample_nesting_policy};
use crate::sailing::{
    default_max_steps, evaluate_policy, infer_theta, inferred_policy, point_estimate_policy, travel_cost_table,
    value_iteration, InferConfig, SailingPolicy, SailingWorld,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "probpref", version, about = "Agents with probabilistic preferences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two agents choosing between two bars.
    #[command(subcommand)]
    Fable(FableCommand),
    /// Flawed formulations and what they really achieve.
    Mistakes(MistakesArgs),
    /// The sailing problem.
    #[command(subcommand)]
    Sailing(SailingCommand),
}

#[derive(Debug, Subcommand)]
pub enum FableCommand {
    /// Choice probabilities over deliberation depths, exact and sampled.
    Sweep(SweepArgs),
    /// Paired posterior samples of the other agent's meeting log-odds.
    Learn(LearnArgs),
}

#[derive(Debug, Subcommand)]
pub enum SailingCommand {
    /// Posterior samples of the policy parameter.
    Infer(InferArgs),
    /// Mean travel cost of one policy.
    Eval(EvalArgs),
    /// Optimal, greedy and inferred travel cost per lake size.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// One of the six named configurations; overridden by explicit values.
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub p1a: Option<f64>,
    #[arg(long)]
    pub pma: Option<f64>,
    #[arg(long)]
    pub p1b: Option<f64>,
    #[arg(long)]
    pub pmb: Option<f64>,
    /// Deepest deliberation depth.
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    /// MH iterations per sampled depth; 0 skips the sampled rows.
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct LearnArgs {
    /// Learner's bar-1 prior.
    #[arg(long, default_value_t = 0.55)]
    pub p1a: f64,
    /// Learner's meeting preference.
    #[arg(long, default_value_t = 0.9)]
    pub pma: f64,
    /// Believed bar-1 prior of the observed agent; defaults to the learner's.
    #[arg(long)]
    pub p1b: Option<f64>,
    /// Deliberation depth assumed for the observed agent.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Observed visits per scenario (all bar 1, then all bar 2).
    #[arg(long, default_value_t = 3)]
    pub visits: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct MistakesArgs {
    #[arg(long, default_value_t = 0.55)]
    pub p1: f64,
    /// Anticipated bar-1 probability of the other agent.
    #[arg(long, default_value_t = 0.55)]
    pub q_hat: f64,
    #[arg(long, default_value_t = 0.5)]
    pub evader_p1: f64,
    #[arg(long, default_value_t = 0.55)]
    pub chaser_p1: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct InferArgs {
    #[arg(long, default_value_t = 25)]
    pub size: u32,
    /// Retained posterior samples.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Voyages per likelihood estimate.
    #[arg(long, default_value_t = 20)]
    pub inner: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Short burn-in for quick checks.
    #[arg(long)]
    pub smoke: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyName {
    Greedy,
    Optimal,
    /// θ redrawn from the posterior for every voyage.
    Inferred,
    /// θ fixed at the posterior mean of log θ.
    Point,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub policy: PolicyName,
    #[arg(long, default_value_t = 25)]
    pub size: u32,
    #[arg(long, default_value_t = 10_000)]
    pub rollouts: usize,
    /// Posterior samples for the inferred policies.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub smoke: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![25u32, 50, 100])]
    pub sizes: Vec<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub rollouts: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub smoke: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Serialize)]
struct Metadata<'a, P: Serialize> {
    program: &'static str,
    version: &'static str,
    subcommand: &'a str,
    params: &'a P,
}

fn emit<P: Serialize, R: Serialize>(subcommand: &str, params: &P, output: &Output, rows: &[R]) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let meta = Metadata {
        program: "probpref",
        version: VERSION,
        subcommand,
        params,
    };
    match output.format {
        Format::Csv => {
            let params = serde_json::to_string(params).map_err(Error::from)?;
            writeln!(sink, "# probpref {VERSION} {subcommand} {params}")?;
            let mut w = csv::Writer::from_writer(&mut sink);
            for r in rows {
                w.serialize(r).map_err(Error::from)?;
            }
            w.flush()?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a, P: Serialize, R: Serialize> {
                metadata: Metadata<'a, P>,
                rows: &'a [R],
            }
            serde_json::to_writer_pretty(&mut sink, &Doc { metadata: meta, rows }).map_err(Error::from)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let (alice, bob) = match args.preset {
        Some(p) => p.agents(),
        None => Preset::MeetSymmetric.agents(),
    };
    let alice = AgentPreferences::new("Alice", args.p1a.unwrap_or(alice.p1), args.pma.unwrap_or(alice.pm)).map_err(usage)?;
    let bob = AgentPreferences::new("Bob", args.p1b.unwrap_or(bob.p1), args.pmb.unwrap_or(bob.pm)).map_err(usage)?;
    let iters = (args.iters > 0).then_some(args.iters);
    let rows = fable_sweep(&alice, &bob, args.depth, iters, args.seed).map_err(|e| match e {
        Error::InvalidArgument(_) => usage(e),
        e => e.into(),
    })?;
    emit("fable sweep", args, &args.output, &rows)
}

fn learn(args: &LearnArgs) -> Result<(), CliError> {
    if args.visits == 0 {
        return Err(CliError::Usage("--visits must be at least 1".into()));
    }
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let me = AgentPreferences::new("Alice", args.p1a, args.pma).map_err(usage)?;
    if let Some(p) = args.p1b {
        AgentPreferences::new("Bob", p, 0.5).map_err(usage)?;
    }
    let config = LearnConfig {
        depth: args.depth,
        other_p1: args.p1b,
        n_samples: args.samples,
        seed: args.seed,
        ..LearnConfig::default()
    };
    let pairs = paired_learning(&me, &vec![Bar::First; args.visits], &vec![Bar::Second; args.visits], &config)?;
    eprintln!("{} of {} pairs ordered", count_ordered(&pairs), pairs.len());
    emit("fable learn", args, &args.output, &pairs)
}

fn mistakes(args: &MistakesArgs) -> Result<(), CliError> {
    let rows = vec![
        future_as_present_report(args.p1, args.q_hat).map_err(usage)?,
        single_sample_nesting_policy(args.evader_p1, args.chaser_p1).map_err(usage)?,
    ];
    emit("mistakes", args, &args.output, &rows)
}

fn world(size: u32) -> Result<SailingWorld, CliError> {
    SailingWorld::new(size).map_err(usage)
}

fn infer_config(samples: usize, smoke: bool, seed: u64) -> Result<InferConfig, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let defaults = InferConfig::default();
    Ok(InferConfig {
        n_samples: samples,
        burn_in: if smoke { samples.div_ceil(10) } else { defaults.burn_in },
        seed,
        ..defaults
    })
}

#[derive(Serialize)]
struct ThetaRow {
    index: usize,
    theta: f64,
}

fn infer(args: &InferArgs) -> Result<(), CliError> {
    let w = world(args.size)?;
    if args.inner == 0 {
        return Err(CliError::Usage("--inner must be at least 1".into()));
    }
    let config = InferConfig {
        n_inner: args.inner,
        ..infer_config(args.samples, args.smoke, args.seed)?
    };
    let samples = infer_theta(&w, &config)?;
    eprintln!("acceptance rate {:.3}", samples.acceptance_rate);
    let rows: Vec<ThetaRow> = samples
        .values
        .iter()
        .enumerate()
        .map(|(index, lt)| ThetaRow { index, theta: lt.exp() })
        .collect();
    emit("sailing infer", args, &args.output, &rows)
}

#[derive(Serialize)]
struct EvalRow {
    policy: PolicyName,
    size: u32,
    mean_cost: f64,
    stderr: f64,
    n_rollouts: usize,
}

fn eval(args: &EvalArgs) -> Result<(), CliError> {
    let w = world(args.size)?;
    let rollouts = if args.smoke { args.rollouts.min(1000) } else { args.rollouts };
    let samples = if args.smoke { args.samples.min(500) } else { args.samples };
    let policy = match args.policy {
        PolicyName::Greedy => SailingPolicy::Greedy,
        PolicyName::Optimal => SailingPolicy::Optimal(Arc::new(value_iteration(
            &w,
            crate::sailing::dp::DEFAULT_TOLERANCE,
            crate::sailing::dp::DEFAULT_MAX_SWEEPS,
        )?)),
        PolicyName::Inferred | PolicyName::Point => {
            let post = infer_theta(&w, &infer_config(samples, args.smoke, derive_seed(args.seed, 1))?)?;
            if args.policy == PolicyName::Inferred {
                inferred_policy(&post)?
            } else {
                point_estimate_policy(&post)?
            }
        }
    };
    let e = evaluate_policy(&w, &policy, rollouts, default_max_steps(&w), args.seed).map_err(|e| match e {
        Error::InvalidArgument(_) => usage(e),
        e => e.into(),
    })?;
    if let Some(warning) = &e.warning {
        eprintln!("warning: {warning}");
    }
    let row = EvalRow {
        policy: args.policy,
        size: e.size,
        mean_cost: e.mean_cost,
        stderr: e.stderr,
        n_rollouts: e.n_rollouts,
    };
    emit("sailing eval", args, &args.output, &[row])
}

#[derive(Serialize)]
struct TableRow {
    size: u32,
    optimal: f64,
    greedy: f64,
    greedy_stderr: f64,
    inferred: f64,
    inferred_stderr: f64,
    acceptance_rate: f64,
}

fn table(args: &TableArgs) -> Result<(), CliError> {
    if args.sizes.is_empty() {
        return Err(CliError::Usage("--sizes must list at least one size".into()));
    }
    for &s in &args.sizes {
        world(s)?;
    }
    let rollouts = if args.smoke { args.rollouts.min(1000) } else { args.rollouts };
    let samples = if args.smoke { args.samples.min(500) } else { args.samples };
    let config = infer_config(samples, args.smoke, args.seed)?;
    let rows: Vec<TableRow> = travel_cost_table(&args.sizes, &config, rollouts, args.seed)?
        .into_iter()
        .map(|r| TableRow {
            size: r.size,
            optimal: r.optimal,
            greedy: r.greedy.mean_cost,
            greedy_stderr: r.greedy.stderr,
            inferred: r.inferred.mean_cost,
            inferred_stderr: r.inferred.stderr,
            acceptance_rate: r.acceptance_rate,
        })
        .collect();
    emit("sailing table", args, &args.output, &rows)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Fable(FableCommand::Sweep(a)) => sweep(a),
        Command::Fable(FableCommand::Learn(a)) => learn(a),
        Command::Mistakes(a) => mistakes(a),
        Command::Sailing(SailingCommand::Infer(a)) => infer(a),
        Command::Sailing(SailingCommand::Eval(a)) => eval(a),
        Command::Sailing(SailingCommand::Table(a)) => table(a),
    }
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
