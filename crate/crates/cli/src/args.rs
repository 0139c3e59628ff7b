use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::Format;

#[derive(Debug, Parser)]
#[command(
    name = "fhmux",
    version,
    about = "Blocking, dimensioning and multiplexing gain of shared fronthaul links"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// User density (users per unit area) [default: 5]
    #[arg(long, global = true, value_parser = non_negative)]
    pub lambda_u: Option<f64>,

    /// RRU density (RRUs per unit area) [default: 1]
    #[arg(long, global = true, value_parser = positive)]
    pub lambda_r: Option<f64>,

    /// Gamma shape of the cell area [default: 3.5]
    #[arg(long, global = true, value_parser = positive)]
    pub gamma_a: Option<f64>,

    /// Gamma rate constant of the cell area [default: 3.5]
    #[arg(long, global = true, value_parser = positive)]
    pub gamma_b: Option<f64>,

    /// Master seed for all random streams [default: 42]
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format [default: csv]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// `key = value` configuration file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for sweeps and simulations
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Blocking probability and bounds over a (K, T_bar) grid
    Blocking(BlockingArgs),
    /// Lower and upper bounds against the exact series for one cluster size
    Bounds(BoundsArgs),
    /// Minimum capacity and multiplexing gain per threshold and cluster size
    Capacity(CapacityArgs),
    /// Spatial and model-level Monte Carlo against the analytical value
    Simulate(SimulateArgs),
    /// Run the acceptance checks and report pass/fail per criterion
    Validate(ValidateArgs),
    /// Tabulate the cluster user-count distribution
    Pmf(PmfArgs),
}

#[derive(Debug, Clone, Args)]
pub struct BlockingArgs {
    /// Cluster sizes
    #[arg(long = "k", value_delimiter = ',', num_args = 1.., value_parser = cluster_size,
          default_values_t = vec![1u32, 3, 5, 10, 20, 50, 100])]
    pub ks: Vec<u32>,

    /// Smallest per-RRU capacity T_bar = T/K
    #[arg(long, default_value_t = 1.0, value_parser = non_negative)]
    pub t_bar_min: f64,

    /// Largest per-RRU capacity
    #[arg(long, default_value_t = 10.0, value_parser = non_negative)]
    pub t_bar_max: f64,

    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub t_bar_step: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long = "k", default_value_t = 5, value_parser = cluster_size)]
    pub k: u32,

    #[arg(long, default_value_t = 1)]
    pub t_min: u64,

    #[arg(long, default_value_t = 2000)]
    pub t_max: u64,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub t_step: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CapacityArgs {
    #[arg(long = "k", value_delimiter = ',', num_args = 1.., value_parser = cluster_size,
          default_values_t = vec![1u32, 3, 5, 10, 20, 50, 100])]
    pub ks: Vec<u32>,

    /// Blocking thresholds P_b^th, each in (0, 1)
    #[arg(long = "threshold", value_delimiter = ',', num_args = 1.., value_parser = probability,
          default_values_t = vec![0.05])]
    pub thresholds: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Cells to simulate as `K:T`
    #[arg(long = "cell", value_delimiter = ',', num_args = 1.., value_parser = cell,
          default_values = ["1:8", "5:29", "10:55"])]
    pub cells: Vec<(u32, u64)>,

    /// Model-level samples of the cluster count per cell
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,

    /// Spatial cluster samples per cell (sets the number of scenario draws)
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub cluster_samples: u64,

    /// Expected RRUs per simulation window
    #[arg(long, default_value_t = 1000.0, value_parser = positive)]
    pub window_rrus: f64,
}

impl Default for SimulateArgs {
    fn default() -> Self {
        SimulateArgs {
            cells: vec![(1, 8), (5, 29), (10, 55)],
            samples: 1_000_000,
            cluster_samples: 1_000_000,
            window_rrus: 1000.0,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Run only these criteria (1-12)
    #[arg(long = "only", value_delimiter = ',', num_args = 1..)]
    pub only: Vec<u8>,
}

#[derive(Debug, Clone, Args)]
pub struct PmfArgs {
    #[arg(long = "k", value_delimiter = ',', num_args = 1.., value_parser = cluster_size,
          default_values_t = vec![1u32])]
    pub ks: Vec<u32>,

    /// Last count to tabulate; defaults to the certified truncation point
    #[arg(long)]
    pub n_max: Option<u64>,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be > 0, got {v}"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be >= 0, got {v}"))
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!(
            "threshold must lie strictly between 0 and 1, got {v}"
        ))
    }
}

fn cluster_size(s: &str) -> Result<u32, String> {
    match s.trim().parse::<u32>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(format!("cluster size must be an integer >= 1, got `{s}`")),
    }
}

fn cell(s: &str) -> Result<(u32, u64), String> {
    let (k, t) = s
        .split_once(':')
        .ok_or_else(|| format!("cell must look like K:T, got `{s}`"))?;
    let t = t
        .trim()
        .parse::<u64>()
        .map_err(|_| format!("capacity must be a non-negative integer, got `{t}`"))?;
    Ok((cluster_size(k)?, t))
}
