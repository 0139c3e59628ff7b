//! Row builders for each subcommand. Rows come back sorted by their key
//! columns regardless of how the work was scheduled.

use fhmux::blocking::{bound_ratio, BoundStatus};
use fhmux::dimensioning::decay_rate_per_unit_capacity;
use fhmux::dist::{log_pmf, PmfTable};
use fhmux::sim::{estimate_blocking, estimate_blocking_model, SimConfig};
use fhmux::{asymptotic_capacity_per_rru, blocking_probability, decay_slope, Dimensioner};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{BlockingArgs, BoundsArgs, CapacityArgs, PmfArgs, SimulateArgs};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::Metadata;

fn sorted_unique<T: Ord + Copy>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn require_nonempty<T>(xs: &[T], what: &str) -> Result<()> {
    if xs.is_empty() {
        Err(CliError::usage(format!("the {what} list is empty")))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockingRow {
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(rename = "T")]
    pub t: u64,
    pub t_bar: f64,
    pub p_block: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub tail_bound: f64,
}

/// `t_bar_min, t_bar_min + step, ...` up to `t_bar_max`.
pub fn t_bar_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || max < min {
        return Err(CliError::usage(format!(
            "empty T_bar range: min {min}, max {max}, step {step}"
        )));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| min + i as f64 * step).collect())
}

/// `K * T_bar` as an exact integer, or a usage error.
fn exact_capacity(k: u32, t_bar: f64) -> Result<u64> {
    let t = f64::from(k) * t_bar;
    let rounded = t.round();
    if (t - rounded).abs() > 1e-9 * rounded.max(1.0) {
        return Err(CliError::usage(format!(
            "K * T_bar must be an integer: K = {k}, T_bar = {t_bar} gives {t}"
        )));
    }
    Ok(rounded as u64)
}

pub fn blocking_rows(config: &RunConfig, args: &BlockingArgs) -> Result<Vec<BlockingRow>> {
    require_nonempty(&args.ks, "K")?;
    let grid = t_bar_grid(args.t_bar_min, args.t_bar_max, args.t_bar_step)?;
    let mut cells = Vec::new();
    for k in sorted_unique(&args.ks) {
        for &t_bar in &grid {
            cells.push((k, exact_capacity(k, t_bar)?));
        }
    }
    let params = config.params;
    Ok(cells
        .par_iter()
        .map(|&(k, t)| {
            let r = blocking_probability(k, t, &params);
            BlockingRow {
                k,
                t,
                t_bar: t as f64 / f64::from(k),
                p_block: r.value,
                lower: r.lower_bound,
                upper: r.upper_bound,
                tail_bound: r.tail_bound,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsRow {
    #[serde(rename = "T")]
    pub t: u64,
    pub p_block: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub ratio: Option<f64>,
    pub bound_status: &'static str,
    /// Natural log of `p_block`, finite even where `p_block` underflows.
    pub log_p_block: f64,
}

pub fn bounds_rows(config: &RunConfig, args: &BoundsArgs) -> Result<Vec<BoundsRow>> {
    if args.t_max < args.t_min {
        return Err(CliError::usage(format!(
            "empty T range: t-min {} > t-max {}",
            args.t_min, args.t_max
        )));
    }
    let params = config.params;
    let ts: Vec<u64> = (args.t_min..=args.t_max)
        .step_by(args.t_step as usize)
        .collect();
    Ok(ts
        .par_iter()
        .map(|&t| {
            let r = blocking_probability(args.k, t, &params);
            let ratio = match r.bounds {
                BoundStatus::Valid => bound_ratio(args.k, t, &params).ok().flatten(),
                _ => None,
            };
            BoundsRow {
                t,
                p_block: r.value,
                lower: r.lower_bound,
                upper: r.upper_bound,
                ratio,
                bound_status: r.bounds.as_str(),
                log_p_block: r.log_value,
            }
        })
        .collect())
}

pub fn bounds_metadata(config: &RunConfig, args: &BoundsArgs) -> Metadata {
    Metadata::new("bounds", config)
        .with("K", f64::from(args.k))
        .with(
            "tangent_slope_per_t",
            decay_rate_per_unit_capacity(&config.params),
        )
        .with(
            "tangent_slope_per_t_bar",
            decay_slope(args.k, &config.params),
        )
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityRow {
    pub threshold: f64,
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(rename = "T_min")]
    pub t_min: u64,
    pub t_bar: f64,
    pub gain: Option<f64>,
    pub asymptote: f64,
    pub asymptotic_gain: Option<f64>,
}

pub fn capacity_rows(config: &RunConfig, args: &CapacityArgs) -> Result<Vec<CapacityRow>> {
    require_nonempty(&args.ks, "K")?;
    require_nonempty(&args.thresholds, "threshold")?;
    let mut thresholds = args.thresholds.clone();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let ks = sorted_unique(&args.ks);
    let dim = Dimensioner::new(config.params);
    let cells: Vec<(f64, u32)> = thresholds
        .iter()
        .flat_map(|&th| ks.iter().map(move |&k| (th, k)))
        .collect();
    cells
        .par_iter()
        .map(|&(threshold, k)| {
            let t_min = dim.min_capacity(k, threshold)?;
            Ok(CapacityRow {
                threshold,
                k,
                t_min,
                t_bar: t_min as f64 / f64::from(k),
                gain: dim.gain(k, threshold).ok(),
                asymptote: asymptotic_capacity_per_rru(threshold, &config.params),
                asymptotic_gain: dim.asymptotic_gain(threshold).ok(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateRow {
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(rename = "T")]
    pub t: u64,
    /// `spatial` (PPP geometry) or `model` (count drawn from the mixture).
    pub method: &'static str,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub samples: u64,
    pub analytic: f64,
    pub z_score: f64,
}

pub fn simulate_rows(config: &RunConfig, args: &SimulateArgs) -> Result<Vec<SimulateRow>> {
    require_nonempty(&args.cells, "cell")?;
    let params = config.params;
    let mut rows = Vec::new();
    for (k, t) in sorted_unique(&args.cells) {
        let analytic = blocking_probability(k, t, &params).value;
        let sim =
            SimConfig::for_cluster_samples(k, args.cluster_samples, args.window_rrus, config.seed);
        let spatial = estimate_blocking(k, t, &params, &sim)?;
        let model = estimate_blocking_model(k, t, &params, args.samples, config.seed);
        for (method, e) in [("model", model), ("spatial", spatial)] {
            rows.push(SimulateRow {
                k,
                t,
                method,
                mc_mean: e.mean,
                mc_stderr: e.stderr,
                samples: e.replications,
                analytic,
                z_score: e.z_score(analytic),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct PmfRow {
    #[serde(rename = "K")]
    pub k: u32,
    pub n: u64,
    pub pmf: f64,
    pub log_pmf: f64,
    pub cdf: f64,
}

pub fn pmf_rows(config: &RunConfig, args: &PmfArgs) -> Result<Vec<PmfRow>> {
    require_nonempty(&args.ks, "K")?;
    let params = config.params;
    let mut rows = Vec::new();
    for k in sorted_unique(&args.ks) {
        let n_max = match args.n_max {
            Some(n) => n,
            None => PmfTable::new(k, &params).truncation_n(),
        };
        let mut cdf = 0.0;
        for n in 0..=n_max {
            let lp = log_pmf(n, k, &params);
            let p = lp.exp();
            cdf += p;
            rows.push(PmfRow {
                k,
                n,
                pmf: p,
                log_pmf: lp,
                cdf,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_exactness() {
        assert_eq!(t_bar_grid(1.0, 10.0, 1.0).unwrap().len(), 10);
        assert_eq!(t_bar_grid(4.0, 6.0, 0.2).unwrap().len(), 11);
        assert!(t_bar_grid(3.0, 2.0, 1.0).is_err());
        assert_eq!(exact_capacity(5, 5.8).unwrap(), 29);
        assert_eq!(exact_capacity(10, 0.3).unwrap(), 3);
        assert!(exact_capacity(3, 0.5).is_err());
    }

    #[test]
    fn capacity_at_reported_point() {
        let rows = capacity_rows(
            &RunConfig::default(),
            &CapacityArgs {
                ks: vec![5, 1],
                thresholds: vec![0.05],
            },
        )
        .unwrap();
        assert_eq!((rows[0].k, rows[0].t_min), (1, 8));
        assert_eq!((rows[1].k, rows[1].t_min), (5, 29));
        assert!((rows[1].gain.unwrap() - 0.275).abs() < 1e-12);
        assert!((rows[1].asymptote - 4.75).abs() < 1e-12);
    }
}
