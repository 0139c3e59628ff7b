use rand::Rng;
use rayon::prelude::*;

use crate::dist::CountSampler;
use crate::error::Result;
use crate::params::ModelParams;

use super::{
    assign_users, form_clusters, sample_ppp, stream_rng, McEstimate, Point, RunningStats, Window,
};

/// Streams at or above this index feed the model-level sampler, keeping it
/// independent of the spatial replications under the same seed.
const MODEL_STREAM_BASE: u64 = 1 << 62;
const MODEL_BATCH: u64 = 10_000;

/// Settings for the spatial Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Independent scenario draws.
    pub scenarios: usize,
    /// Expected number of RRUs per window.
    pub window_rrus: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scenarios: 100,
            window_rrus: 1000.0,
            seed: 42,
        }
    }
}

impl SimConfig {
    /// Enough scenarios to collect at least about `samples` cluster samples of
    /// size `k`, allowing for the RRUs left over after grouping.
    pub fn for_cluster_samples(k: u32, samples: u64, window_rrus: f64, seed: u64) -> Self {
        let k = f64::from(k);
        let per_window = ((window_rrus - k) / k).max(1.0);
        SimConfig {
            scenarios: (samples as f64 / per_window).ceil() as usize,
            window_rrus,
            seed,
        }
    }
}

/// One draw of RRUs, users, nearest-RRU assignment and random clusters.
#[derive(Debug, Clone)]
pub struct SpatialScenario {
    pub window: Window,
    pub rru_points: Vec<Point>,
    pub user_points: Vec<Point>,
    /// Serving RRU of each user.
    pub assignment: Vec<usize>,
    /// Disjoint groups of exactly `k` RRU indices; empty if fewer than `k` RRUs were drawn.
    pub clusters: Vec<Vec<usize>>,
}

impl SpatialScenario {
    pub fn generate<R: Rng + ?Sized>(
        k: u32,
        params: &ModelParams,
        window: Window,
        rng: &mut R,
    ) -> Self {
        let rru_points = sample_ppp(params.lambda_r(), &window, rng);
        let user_points = sample_ppp(params.lambda_u(), &window, rng);
        let assignment = if rru_points.is_empty() {
            Vec::new()
        } else {
            assign_users(&user_points, &rru_points, &window).expect("RRU set is non-empty")
        };
        let clusters = form_clusters(rru_points.len(), k, rng).unwrap_or_default();
        SpatialScenario {
            window,
            rru_points,
            user_points,
            assignment,
            clusters,
        }
    }

    pub fn users_per_rru(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.rru_points.len()];
        for &i in &self.assignment {
            counts[i] += 1;
        }
        counts
    }

    /// Total users in each cluster.
    pub fn cluster_loads(&self) -> Vec<u64> {
        let per_rru = self.users_per_rru();
        self.clusters
            .iter()
            .map(|g| g.iter().map(|&i| per_rru[i]).sum())
            .collect()
    }
}

/// Blocked fraction of a cluster carrying `n` users on a link of capacity `t`.
fn blocked_fraction(n: u64, t: u64) -> f64 {
    if n > t {
        (n - t) as f64 / n as f64
    } else {
        0.0
    }
}

/// Spatial Monte Carlo estimate of the blocking probability: the mean blocked
/// fraction over every cluster of every scenario.
pub fn estimate_blocking(
    k: u32,
    t: u64,
    params: &ModelParams,
    config: &SimConfig,
) -> Result<McEstimate> {
    let window = Window::square_for(config.window_rrus, params.lambda_r());
    let parts: Vec<RunningStats> = (0..config.scenarios as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(config.seed, i);
            let scenario = SpatialScenario::generate(k, params, window, &mut rng);
            let mut stats = RunningStats::new();
            for n in scenario.cluster_loads() {
                stats.push(blocked_fraction(n, t));
            }
            stats
        })
        .collect();
    let mut total = RunningStats::new();
    parts.iter().for_each(|p| total.merge(p));
    Ok(total.estimate(config.seed))
}

/// Model-level Monte Carlo: draws the cluster count directly from the
/// gamma-Poisson mixture, bypassing the geometry.
pub fn estimate_blocking_model(
    k: u32,
    t: u64,
    params: &ModelParams,
    samples: u64,
    seed: u64,
) -> McEstimate {
    let sampler = CountSampler::new(k, params);
    let batches = samples.div_ceil(MODEL_BATCH);
    let parts: Vec<RunningStats> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, MODEL_STREAM_BASE + b);
            let len = MODEL_BATCH.min(samples - b * MODEL_BATCH);
            let mut stats = RunningStats::new();
            for _ in 0..len {
                stats.push(blocked_fraction(sampler.sample(&mut rng), t));
            }
            stats
        })
        .collect();
    let mut total = RunningStats::new();
    parts.iter().for_each(|p| total.merge(p));
    total.estimate(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocked_fraction_cases() {
        assert_eq!(blocked_fraction(0, 0), 0.0);
        assert_eq!(blocked_fraction(5, 8), 0.0);
        assert_eq!(blocked_fraction(10, 8), 0.2);
        assert_eq!(blocked_fraction(4, 0), 1.0);
    }

    #[test]
    fn scenario_invariants() {
        let p = ModelParams::default();
        let mut rng = stream_rng(5, 0);
        let s = SpatialScenario::generate(3, &p, Window::square_for(200.0, 1.0), &mut rng);
        assert_eq!(s.assignment.len(), s.user_points.len());
        assert_eq!(s.clusters.len(), s.rru_points.len() / 3);
        let clustered: u64 = s.cluster_loads().iter().sum();
        assert!(clustered <= s.user_points.len() as u64);
        assert_eq!(
            s.users_per_rru().iter().sum::<u64>(),
            s.user_points.len() as u64
        );
    }

    #[test]
    fn no_users_no_blocking() {
        let p = ModelParams::new(0.0, 1.0).unwrap();
        let cfg = SimConfig {
            scenarios: 4,
            window_rrus: 200.0,
            seed: 1,
        };
        let e = estimate_blocking(2, 0, &p, &cfg).unwrap();
        assert_eq!((e.mean, e.stderr), (0.0, 0.0));
        assert!(e.replications > 300);
        let m = estimate_blocking_model(2, 0, &p, 1000, 1);
        assert_eq!((m.mean, m.stderr), (0.0, 0.0));
    }

    #[test]
    fn sample_budget() {
        let cfg = SimConfig::for_cluster_samples(5, 1_000_000, 1000.0, 7);
        assert_eq!(cfg.scenarios, 5026);
    }
}
