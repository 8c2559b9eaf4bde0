use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gensearch_core::PlanMethod;

#[derive(Debug, Parser)]
#[command(
    name = "gensearch",
    version,
    about = "Simulate and plan generalized amplitude-amplification searches"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate Q^n|s> and compare with the closed-form success probability.
    #[command(after_help = SIMULATE_COLUMNS)]
    Simulate(SimulateArgs),
    /// Optimal restart schedule for one or several searchers.
    #[command(after_help = PLAN_COLUMNS)]
    Plan(PlanArgs),
    /// Success probability grid over iteration count and number of targets.
    #[command(after_help = HEATMAP_COLUMNS)]
    Heatmap(HeatmapArgs),
    /// Optimal iteration count and cost against the number of searchers.
    #[command(after_help = SWEEP_COLUMNS)]
    ParallelSweep(SweepArgs),
    /// Restart experiments compared with the closed-form expected cost.
    #[command(after_help = MONTECARLO_COLUMNS)]
    Montecarlo(MonteCarloArgs),
    /// Check the library against known special cases and constants.
    Verify,
}

const SIMULATE_COLUMNS: &str =
    "CSV columns: n,p_simulated,p_analytic,v,phi,alpha,beta,b,psi,w_t,w_l\n\
Decomposition columns are empty when the overlap with the target subspace is 0 or 1.";
const PLAN_COLUMNS: &str = "CSV columns: n_items,r,agents,method,phi,n_opt,n_int,probability,\
expected_cost,model_cost,stddev_geometric,stddev_quadratic,parallel_x,parallel_n_opt,\
parallel_n_int,parallel_expected_cost,parallel_exact_cost";
const HEATMAP_COLUMNS: &str = "CSV: header n,1,2,...,N; one row per iteration count n, one \
column per number of targets r.\nPGM: binary P5, maxval 255 (255 = probability 1), rows = n \
ascending, columns = r ascending.";
const SWEEP_COLUMNS: &str = "CSV columns: r,k,n_numeric,n_formula,cost_numeric,cost_formula,\
cost_exact_at_formula_n\nFormula columns are empty for k < 2 or r/N > 0.01.";
const MONTECARLO_COLUMNS: &str = "CSV columns: p,n,agents,trials,seed,closed_form_time,\
closed_form_std_dev,mean,stderr,std_dev,std_dev_stderr,agent_calls_mean,statevector_mean,\
statevector_stderr";

/// Target indices, or a count `r` placing targets at `0..r`.
#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Comma-separated target indices.
    #[arg(long, value_delimiter = ',', conflicts_with = "num_targets")]
    pub targets: Option<Vec<usize>>,
    /// Number of targets, placed at indices 0..r-1.
    #[arg(long)]
    pub num_targets: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Number of items N.
    #[arg(long)]
    pub n_items: Option<usize>,
    #[command(flatten)]
    pub targets: TargetArgs,
    /// Starting state: uniform, random:<seed> or file:<path>.
    #[arg(long, default_value = "uniform")]
    pub start: StateSpec,
    /// Averaging state: uniform or file:<path>.
    #[arg(long, default_value = "uniform", value_parser = parse_averaging)]
    pub averaging: StateSpec,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Iteration count or inclusive range a..b.
    #[arg(long, default_value = "0..10")]
    pub iterations: IterRange,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub n_items: u64,
    #[command(flatten)]
    pub targets: TargetArgs,
    /// Number of parallel searchers.
    #[arg(long, default_value_t = 1)]
    pub agents: u32,
    #[arg(long, value_enum, default_value_t = Method::Numeric)]
    pub method: Method,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long, default_value_t = 64)]
    pub n_items: usize,
    /// Largest iteration count, or an inclusive range a..b of rows.
    /// Defaults to two periods of the single-target column.
    #[arg(long)]
    pub iterations: Option<IterRange>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1 << 20)]
    pub n_items: u64,
    /// Target counts, single value or inclusive range a..b.
    #[arg(long, default_value = "1..5")]
    pub num_targets: IterRange,
    /// Searcher counts, single value or inclusive range a..b.
    #[arg(long, default_value = "1..64")]
    pub agents: IterRange,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    /// Per-round success probability; replaces the instance flags.
    #[arg(long, conflicts_with_all = ["n_items", "targets", "num_targets", "start", "averaging"])]
    pub probability: Option<f64>,
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Iterations per round.
    #[arg(long)]
    pub iterations: u64,
    #[arg(long, default_value_t = 1)]
    pub agents: u32,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pgm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    ClosedForm,
    Numeric,
}

impl From<Method> for PlanMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::ClosedForm => PlanMethod::ClosedForm,
            Method::Numeric => PlanMethod::Numeric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpec {
    Uniform,
    Random(u64),
    File(PathBuf),
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "uniform" {
            return Ok(Self::Uniform);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed
                .parse()
                .map(Self::Random)
                .map_err(|e| format!("bad seed {seed:?}: {e}"));
        }
        match s.strip_prefix("file:") {
            Some(path) if !path.is_empty() => Ok(Self::File(PathBuf::from(path))),
            _ => Err(format!(
                "expected uniform, random:<seed> or file:<path>, got {s:?}"
            )),
        }
    }
}

fn parse_averaging(s: &str) -> Result<StateSpec, String> {
    match s.parse()? {
        StateSpec::Random(_) => Err("averaging state must be uniform or file:<path>".into()),
        spec => Ok(spec),
    }
}

/// Inclusive range `start..=end`; a single value `a` means `a..=a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterRange {
    pub start: u64,
    pub end: u64,
}

impl IterRange {
    pub fn iter(self) -> std::ops::RangeInclusive<u64> {
        self.start..=self.end
    }
}

impl FromStr for IterRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad count {t:?}: {e}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b)?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Self { start, end })
    }
}

impl fmt::Display for IterRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl Command {
    pub fn output(&self) -> Option<&OutputArgs> {
        match self {
            Command::Simulate(a) => Some(&a.output),
            Command::Plan(a) => Some(&a.output),
            Command::Heatmap(a) => Some(&a.output),
            Command::ParallelSweep(a) => Some(&a.output),
            Command::Montecarlo(a) => Some(&a.output),
            Command::Verify => None,
        }
    }

    pub fn out_path(&self) -> Option<&Path> {
        self.output().and_then(|o| o.out.as_deref())
    }
}
