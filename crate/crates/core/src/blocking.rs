//! User blocking probability of a shared link.
//!
//! With `N` users in a cluster and a link carrying at most `T` of them, the
//! blocked fraction is `(N - T)^+ / N`. Its expectation is the series
//!
//! ```text
//! P_b(K, T) = sum_{n > T} P_K{N = n} (n - T) / n
//! ```
//!
//! which is summed here in log space with a certified geometric tail. The
//! successive terms obey `t(n+1) / t(n) = (n+1-T)/(n-T) * a_n * lam` with
//! `a_n = n (n + Ka) / (n + 1)^2`; bounding `a_n` between 1 and its value at
//! `n = T + 1` gives the closed-form lower and upper bounds.

use crate::dist::log_pmf;
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Relative tail tolerance of the blocking series.
pub const SERIES_TOLERANCE: f64 = 1e-12;
/// Probabilities below this are reported as zero with [`BlockingResult::underflow`] set.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Why the closed-form bounds are or are not attached to a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    /// Both bounds present.
    Valid,
    /// Lower bound present; the upper geometric sum diverges (`c >= 1`).
    UpperDegenerate,
    /// `T <= 2/(Ka - 2)` or `(K, T) = (1, 1)`.
    OutsideDomain,
    /// No users: all three quantities are zero.
    NoUsers,
}

impl BoundStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundStatus::Valid => "valid",
            BoundStatus::UpperDegenerate => "upper_degenerate",
            BoundStatus::OutsideDomain => "outside_domain",
            BoundStatus::NoUsers => "no_users",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockingResult {
    pub k: u32,
    pub t: u64,
    /// Truncated series value; zero when `underflow` is set.
    pub value: f64,
    /// Natural log of the series value, kept even when `value` underflows.
    pub log_value: f64,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub bounds: BoundStatus,
    /// Last series index included.
    pub truncation_n: u64,
    /// Certified bound on the omitted tail.
    pub tail_bound: f64,
    pub underflow: bool,
}

/// `a_n^K = n (n + Ka) / (n + 1)^2`.
pub fn shift_coefficient(n: u64, k: u32, params: &ModelParams) -> f64 {
    let n = n as f64;
    n * (n + params.cluster_shape(k)) / ((n + 1.0) * (n + 1.0))
}

/// Ratio of consecutive blocking-series terms, `t(n+1) / t(n)`.
///
/// # Panics
///
/// If `n <= t`: the series starts at `n = t + 1`.
pub fn term_ratio_factor(n: u64, k: u32, t: u64, params: &ModelParams) -> f64 {
    assert!(n > t, "series terms start at n = T + 1 (n = {n}, T = {t})");
    let gap = (n - t) as f64;
    (gap + 1.0) / gap * shift_coefficient(n, k, params) * params.lam()
}

/// `ln` of the series term `P_K{N = n} (n - T) / n`.
fn log_term(n: u64, k: u32, t: u64, params: &ModelParams) -> f64 {
    log_pmf(n, k, params) + ((n - t) as f64).ln() - (n as f64).ln()
}

/// Sum of `exp(x_i)` held as `exp(scale) * sum` so that neither huge nor tiny
/// magnitudes are lost.
#[derive(Debug, Clone, Copy)]
struct ScaledSum {
    scale: f64,
    sum: f64,
}

impl ScaledSum {
    fn new() -> Self {
        ScaledSum {
            scale: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    fn add_log(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if self.scale == f64::NEG_INFINITY {
            self.scale = x;
            self.sum = 1.0;
        } else if x > self.scale {
            self.sum = self.sum * (self.scale - x).exp() + 1.0;
            self.scale = x;
        } else {
            self.sum += (x - self.scale).exp();
        }
    }

    fn ln(&self) -> f64 {
        self.scale + self.sum.ln()
    }
}

struct Series {
    log_value: f64,
    truncation_n: u64,
    log_tail: f64,
}

fn sum_series(k: u32, t: u64, params: &ModelParams, rel_tol: f64) -> Series {
    if params.is_empty() {
        return Series {
            log_value: f64::NEG_INFINITY,
            truncation_n: t + 1,
            log_tail: f64::NEG_INFINITY,
        };
    }
    let ka = params.cluster_shape(k);
    let lam = params.lam();
    let log_tol = rel_tol.ln();
    let mut acc = ScaledSum::new();
    let mut n = t + 1;
    loop {
        let lt = log_term(n, k, t, params);
        acc.add_log(lt);
        // Every later ratio is below (m+1-T)/(m-T) * lam * (m+Ka)/(m+1), which
        // is non-increasing in m.
        let gap = (n - t) as f64;
        let q = (n as f64 + ka) / (n as f64 + 1.0);
        let rho = (gap + 1.0) / gap * lam * if ka >= 1.0 { q } else { 1.0 };
        if rho < 1.0 {
            let log_tail = lt + (rho / (1.0 - rho)).ln();
            if log_tail < log_tol + acc.ln() {
                return Series {
                    log_value: acc.ln(),
                    truncation_n: n,
                    log_tail,
                };
            }
        }
        n += 1;
    }
}

/// Checks `T > 2/(Ka - 2)` and `(K, T) != (1, 1)`.
pub fn check_bound_domain(k: u32, t: u64, params: &ModelParams) -> Result<()> {
    let ka = params.cluster_shape(k);
    let inside = ka > 2.0 && (t as f64) > 2.0 / (ka - 2.0) && !(k == 1 && t == 1);
    if inside {
        Ok(())
    } else {
        Err(Error::BoundDomain { k, t, ka })
    }
}

/// The constant `c = (T+1)(T+Ka+1) lam / (T+2)^2` of the upper bound.
pub fn upper_ratio_constant(k: u32, t: u64, params: &ModelParams) -> f64 {
    let t = t as f64;
    let ka = params.cluster_shape(k);
    (t + 1.0) * (t + ka + 1.0) * params.lam() / ((t + 2.0) * (t + 2.0))
}

/// `ln` of the lower bound `pmf(T+1) / ((T+1)(1-lam)^2)`.
pub fn log_lower_bound(k: u32, t: u64, params: &ModelParams) -> Result<f64> {
    check_bound_domain(k, t, params)?;
    Ok(log_pmf(t + 1, k, params) - ((t + 1) as f64).ln() - 2.0 * (1.0 - params.lam()).ln())
}

/// `ln` of the upper bound `pmf(T+1) / ((T+1)(1-c)^2)`, or `None` when `c >= 1`.
pub fn log_upper_bound(k: u32, t: u64, params: &ModelParams) -> Result<Option<f64>> {
    check_bound_domain(k, t, params)?;
    let c = upper_ratio_constant(k, t, params);
    Ok((c < 1.0).then(|| log_pmf(t + 1, k, params) - ((t + 1) as f64).ln() - 2.0 * (1.0 - c).ln()))
}

pub fn blocking_lower_bound(k: u32, t: u64, params: &ModelParams) -> Result<f64> {
    log_lower_bound(k, t, params).map(f64::exp)
}

pub fn blocking_upper_bound(k: u32, t: u64, params: &ModelParams) -> Result<Option<f64>> {
    log_upper_bound(k, t, params).map(|u| u.map(f64::exp))
}

/// The expression `((1 - c) / (1 - lam))^2`, defined for every `T` but only a
/// ratio of bounds when `c < 1`.
pub fn bound_ratio_expression(k: u32, t: u64, params: &ModelParams) -> f64 {
    let c = upper_ratio_constant(k, t, params);
    ((1.0 - c) / (1.0 - params.lam())).powi(2)
}

/// Lower over upper bound, evaluated without the shared PMF factor so it stays
/// exact when both bounds underflow. `None` when the upper bound is absent.
pub fn bound_ratio(k: u32, t: u64, params: &ModelParams) -> Result<Option<f64>> {
    check_bound_domain(k, t, params)?;
    let c = upper_ratio_constant(k, t, params);
    Ok((c < 1.0).then(|| bound_ratio_expression(k, t, params)))
}

/// Blocking probability with the default relative tail tolerance.
pub fn blocking_probability(k: u32, t: u64, params: &ModelParams) -> BlockingResult {
    blocking_probability_with_tolerance(k, t, params, SERIES_TOLERANCE)
}

pub fn blocking_probability_with_tolerance(
    k: u32,
    t: u64,
    params: &ModelParams,
    rel_tol: f64,
) -> BlockingResult {
    assert!(k >= 1, "cluster size must be at least 1");
    let series = sum_series(k, t, params, rel_tol);
    let underflow = series.log_value.exp() < UNDERFLOW_FLOOR && !params.is_empty();
    let value = if underflow {
        0.0
    } else {
        series.log_value.exp()
    };

    let (lower_bound, upper_bound, bounds) = if params.is_empty() {
        (None, None, BoundStatus::NoUsers)
    } else {
        match (log_lower_bound(k, t, params), log_upper_bound(k, t, params)) {
            (Ok(lo), Ok(Some(up))) => (Some(lo.exp()), Some(up.exp()), BoundStatus::Valid),
            (Ok(lo), Ok(None)) => (Some(lo.exp()), None, BoundStatus::UpperDegenerate),
            _ => (None, None, BoundStatus::OutsideDomain),
        }
    };

    BlockingResult {
        k,
        t,
        value,
        log_value: series.log_value,
        lower_bound,
        upper_bound,
        bounds,
        truncation_n: series.truncation_n,
        tail_bound: series.log_tail.exp(),
        underflow,
    }
}
