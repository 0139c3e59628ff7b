//! The cluster user-count law.
//!
//! Summing `K` independent gamma cell areas gives a `Gamma(K a, rate b
//! lambda_r)` cluster area, and users on that area are Poisson. The marginal
//! count `N` is therefore negative binomial with real-valued shape `K a` and
//! success ratio `lam = mu / (mu + b)`:
//!
//! ```text
//! P_K{N = n} = Gamma(n + Ka) / (Gamma(Ka) n!) * (1 - lam)^Ka * lam^n
//! ```
//!
//! Everything is evaluated through `ln Gamma`, so counts in the millions stay
//! representable.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use statrs::function::gamma::ln_gamma;

use crate::params::ModelParams;

/// Absolute tail mass left out of a [`PmfTable`].
pub const PMF_TAIL_TOLERANCE: f64 = 1e-12;

/// `ln P_K{N = n}`. Returns `-inf` for impossible counts.
pub fn log_pmf(n: u64, k: u32, params: &ModelParams) -> f64 {
    if params.is_empty() {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let ka = params.cluster_shape(k);
    let nf = n as f64;
    let (mu, b) = (params.mu(), params.b());
    let head = ka * b.ln() - (ka + nf) * (mu + b).ln();
    let count_part = if n == 0 {
        0.0
    } else {
        nf * mu.ln() + ln_gamma(nf + ka) - ln_gamma(ka) - ln_gamma(nf + 1.0)
    };
    head + count_part
}

/// `P_K{N = n}`.
pub fn pmf(n: u64, k: u32, params: &ModelParams) -> f64 {
    log_pmf(n, k, params).exp()
}

/// `E[N | K] = K mu`.
pub fn mean_count(k: u32, params: &ModelParams) -> f64 {
    f64::from(k) * params.mu()
}

/// Upper bound on `P{N = m + 1} / P{N = m}` for every `m >= n`, or `None`
/// while the PMF may still be rising.
pub(crate) fn tail_ratio_bound(n: u64, ka: f64, lam: f64) -> Option<f64> {
    let q = (n as f64 + ka) / (n as f64 + 1.0);
    // (m + Ka)/(m + 1) decreases in m for Ka >= 1 and rises towards 1 otherwise.
    let r = lam * if ka >= 1.0 { q } else { 1.0 };
    (r < 1.0).then_some(r)
}

/// The PMF tabulated from `0` to a certified truncation point `N*`.
#[derive(Debug, Clone)]
pub struct PmfTable {
    pub k: u32,
    /// `probs[n] = P_K{N = n}` for `n = 0..=N*`.
    pub probs: Vec<f64>,
    /// Bound on `sum_{n > N*} P_K{N = n}`.
    pub tail_bound: f64,
}

impl PmfTable {
    pub fn new(k: u32, params: &ModelParams) -> Self {
        Self::with_tolerance(k, params, PMF_TAIL_TOLERANCE)
    }

    /// Tabulates until the geometric tail bound `pmf(N*) r / (1 - r)` drops
    /// below `tol`, where `r` bounds every later successive ratio.
    pub fn with_tolerance(k: u32, params: &ModelParams, tol: f64) -> Self {
        if params.is_empty() {
            return PmfTable {
                k,
                probs: vec![1.0],
                tail_bound: 0.0,
            };
        }
        let ka = params.cluster_shape(k);
        let lam = params.lam();
        let log_tol = tol.ln();
        let mut probs = Vec::new();
        let mut n = 0u64;
        loop {
            let lp = log_pmf(n, k, params);
            probs.push(lp.exp());
            if let Some(r) = tail_ratio_bound(n, ka, lam) {
                let log_tail = lp + (r / (1.0 - r)).ln();
                if log_tail < log_tol {
                    return PmfTable {
                        k,
                        probs,
                        tail_bound: log_tail.exp(),
                    };
                }
            }
            n += 1;
        }
    }

    /// Last tabulated count `N*`.
    pub fn truncation_n(&self) -> u64 {
        self.probs.len() as u64 - 1
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }
}

/// Draws cluster user counts by first drawing the cluster area and then the
/// Poisson number of users on it.
#[derive(Debug, Clone)]
pub struct CountSampler {
    area: Option<Gamma<f64>>,
    lambda_u: f64,
}

impl CountSampler {
    pub fn new(k: u32, params: &ModelParams) -> Self {
        let area = (!params.is_empty()).then(|| {
            Gamma::new(
                params.cluster_shape(k),
                1.0 / (params.b() * params.lambda_r()),
            )
            .expect("shape and scale are positive")
        });
        CountSampler {
            area,
            lambda_u: params.lambda_u(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let Some(area) = &self.area else {
            return 0;
        };
        let mean = self.lambda_u * area.sample(rng);
        if mean <= 0.0 {
            return 0;
        }
        Poisson::new(mean)
            .expect("Poisson mean is positive and finite")
            .sample(rng) as u64
    }
}

/// One draw of the cluster user count.
pub fn sample_count<R: Rng + ?Sized>(k: u32, params: &ModelParams, rng: &mut R) -> u64 {
    CountSampler::new(k, params).sample(rng)
}
