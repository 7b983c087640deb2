use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "advice-soco",
    version,
    about = "Online optimization with switching costs and untrusted predictions"
)]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (default stdout).
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one instance and report costs and bound checks.
    Run(RunArgs),
    /// Microgrid sweep over seeds, δ and forecast perturbations (CSV).
    Sweep(SweepArgs),
    /// LP certificates and closed-form bounds (JSON).
    Bounds(BoundsArgs),
    /// Play a lower-bound game and print its transcript (JSON lines).
    Adversarial(AdversarialArgs),
    /// One microgrid episode, round by round (CSV).
    Microgrid(MicrogridArgs),
    /// Run the invariant suite on fresh random instances.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Aos,
    Ftp,
    Greedy,
    Blind,
    Aobd,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Aos => "aos",
            Algo::Ftp => "ftp",
            Algo::Greedy => "greedy",
            Algo::Blind => "blind",
            Algo::Aobd => "aobd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Finite,
    Line,
    Microgrid,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RunArgs {
    /// Instance file (see docs/instance-schema.md).
    #[arg(long, conflicts_with = "generate")]
    pub instance: Option<PathBuf>,
    /// Random instance family, seeded by --seed.
    #[arg(long, value_enum)]
    pub generate: Option<Generator>,
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    /// AOS trade-off parameter, also used for the AOBD band when no β is given.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub beta_lo: Option<f64>,
    #[arg(long)]
    pub beta_hi: Option<f64>,
    /// Polyhedral constant for the robustness bound (default: measured).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Rounds of a generated instance.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Largest point count of a generated finite instance.
    #[arg(long)]
    pub points: Option<usize>,
    /// Share of generated predictions that copy the optimum.
    #[arg(long)]
    pub quality: Option<f64>,
    /// Forecast noise of the generated microgrid predictor.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Lookahead of the generated microgrid predictor.
    #[arg(long)]
    pub window: Option<usize>,
    /// Grid step for line optima.
    #[arg(long)]
    pub grid_h: Option<f64>,
    /// Include the decisions in the report.
    #[arg(long)]
    pub trajectory: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    /// Number of seeds, starting at --seed.
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub deltas: Option<Vec<f64>>,
    /// Gaussian forecast noise levels.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sigmas: Option<Vec<f64>>,
    /// Forecast bias levels.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mus: Option<Vec<f64>>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    /// Worker threads (default: ADVICE_SOCO_JOBS, else all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BoundsArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub t_min: Option<usize>,
    #[arg(long)]
    pub t_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Game {
    /// Two-round game on the line.
    Thm5,
    /// Adaptive game in the plane against memoryless rules.
    Memoryless,
    /// Fixed instance that forces consistent algorithms off the minimizer.
    Prop5,
    /// Line game with half-squared switching.
    Bregman,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Steps {
    Lp,
    ClosedForm,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct AdversarialArgs {
    #[arg(value_enum)]
    pub game: Game,
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub beta_lo: Option<f64>,
    #[arg(long)]
    pub beta_hi: Option<f64>,
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Step sizes of the prop5 instance.
    #[arg(long, value_enum)]
    pub steps: Option<Steps>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MicrogridArgs {
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, conflicts_with = "sigma")]
    pub mu: Option<f64>,
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Random instances per suite.
    #[arg(long)]
    pub instances: Option<usize>,
}
