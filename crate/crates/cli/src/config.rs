//! Run configuration: defaults, then `--config` file values, then flags.
//!
//! The config file is flat UTF-8 text with one `key = value` per line; blank
//! lines and everything after `#` are ignored.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fhmux::{ModelParams, DEFAULT_RATE, DEFAULT_SHAPE};

use crate::args::CommonArgs;
use crate::error::{CliError, Result};

pub const DEFAULT_SEED: u64 = 42;

const KNOWN_KEYS: &[&str] = &[
    "lambda_u", "lambda_r", "gamma_a", "gamma_b", "seed", "out", "format", "threads",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::usage(format!(
                "unknown format `{other}`; expected `csv` or `json`"
            ))),
        }
    }
}

/// Resolved settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::default(),
            seed: DEFAULT_SEED,
            out: None,
            format: Format::Csv,
            threads: None,
        }
    }
}

/// Parses `key = value` lines.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config line {}: expected `key = value`, got `{raw}`",
                i + 1
            )));
        };
        let key = key.trim().replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!(
                "config line {}: unknown key `{key}` (known: {})",
                i + 1,
                KNOWN_KEYS.join(", ")
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::usage(format!("config key `{key}`: cannot parse `{value}`")))
}

fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key).map(|v| parse_value(key, v)).transpose(),
    }
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs) -> Result<Self> {
        let file = match &common.config {
            Some(path) => load_config(path)?,
            None => BTreeMap::new(),
        };
        let lambda_u = pick(common.lambda_u, &file, "lambda_u")?.unwrap_or(5.0);
        let lambda_r = pick(common.lambda_r, &file, "lambda_r")?.unwrap_or(1.0);
        let a = pick(common.gamma_a, &file, "gamma_a")?.unwrap_or(DEFAULT_SHAPE);
        let b = pick(common.gamma_b, &file, "gamma_b")?.unwrap_or(DEFAULT_RATE);
        let params = ModelParams::with_gamma(lambda_u, lambda_r, a, b)
            .map_err(|e| CliError::usage(e.to_string()))?;
        let threads: Option<usize> = pick(common.threads, &file, "threads")?;
        if threads == Some(0) {
            return Err(CliError::usage("threads must be at least 1"));
        }
        Ok(RunConfig {
            params,
            seed: pick(common.seed, &file, "seed")?.unwrap_or(DEFAULT_SEED),
            out: pick(common.out.clone(), &file, "out")?,
            format: pick(common.format, &file, "format")?.unwrap_or(Format::Csv),
            threads,
        })
    }

    /// Runs `f` on a pool with the configured worker count.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::usage(format!("cannot start {n} threads: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text)
}
