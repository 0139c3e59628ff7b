//! Capacity dimensioning and multiplexing gain.
//!
//! `T_K(p)` is the smallest link capacity whose blocking probability does not
//! exceed `p`; the gain of sharing one link among `K` RRUs is the relative
//! saving in per-RRU capacity, `G_K = 1 - T_K / (K T_1)`. As `K` grows the
//! blocked fraction converges to `max(0, 1 - T_bar / mu)`, so the per-RRU
//! capacity tends to `(1 - p) mu`.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::blocking::blocking_probability;
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Smallest threshold the series can resolve; see [`crate::blocking::UNDERFLOW_FLOOR`].
pub const MIN_THRESHOLD: f64 = 1e-300;

const MAX_CAPACITY: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensioningResult {
    pub k: u32,
    pub p_threshold: f64,
    pub t_min: u64,
    /// `t_min / k`.
    pub t_bar: f64,
    pub gain: f64,
}

fn check_threshold(p: f64) -> Result<()> {
    if (MIN_THRESHOLD..1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Threshold(p))
    }
}

fn meets(k: u32, t: u64, log_p: f64, params: &ModelParams) -> bool {
    blocking_probability(k, t, params).log_value <= log_p
}

/// `T_K(p)`: the least `T >= 0` with blocking probability at most `p`.
///
/// Blocking is strictly decreasing in `T`, so the search doubles an upper
/// bracket from `T = 1` and then bisects.
pub fn min_capacity(k: u32, p_threshold: f64, params: &ModelParams) -> Result<u64> {
    check_threshold(p_threshold)?;
    let log_p = p_threshold.ln();
    if meets(k, 0, log_p, params) {
        return Ok(0);
    }
    // Invariant: `lo` fails, `hi` meets.
    let mut lo = 0u64;
    let mut hi = 1u64;
    while !meets(k, hi, log_p, params) {
        lo = hi;
        hi *= 2;
        if hi > MAX_CAPACITY {
            return Err(Error::SearchExhausted(MAX_CAPACITY));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(k, mid, log_p, params) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `G_K(p) = 1 - T_K / (K T_1)`.
pub fn gain(k: u32, p_threshold: f64, params: &ModelParams) -> Result<f64> {
    let t1 = min_capacity(1, p_threshold, params)?;
    let tk = if k == 1 {
        t1
    } else {
        min_capacity(k, p_threshold, params)?
    };
    gain_from(k, tk, t1, p_threshold)
}

fn gain_from(k: u32, tk: u64, t1: u64, p_threshold: f64) -> Result<f64> {
    if t1 == 0 {
        return Err(Error::UndefinedGain(p_threshold));
    }
    Ok(1.0 - tk as f64 / (f64::from(k) * t1 as f64))
}

/// Limit of the blocking probability as `K -> inf` at fixed per-RRU capacity.
pub fn asymptotic_blocking(t_bar: f64, params: &ModelParams) -> f64 {
    if params.is_empty() {
        return 0.0;
    }
    (1.0 - t_bar / params.mu()).max(0.0)
}

/// Limit of `T_K(p) / K` as `K -> inf`: `(1 - p) mu`.
pub fn asymptotic_capacity_per_rru(p_threshold: f64, params: &ModelParams) -> f64 {
    (1.0 - p_threshold) * params.mu()
}

/// Limit of the gain as `K -> inf`: `1 - (1 - p) mu / T_1(p)`.
pub fn asymptotic_gain(p_threshold: f64, params: &ModelParams) -> Result<f64> {
    let t1 = min_capacity(1, p_threshold, params)?;
    if t1 == 0 {
        return Err(Error::UndefinedGain(p_threshold));
    }
    Ok(1.0 - asymptotic_capacity_per_rru(p_threshold, params) / t1 as f64)
}

/// Asymptotic slope of `ln P_b` against the per-RRU capacity `T_bar`: `K ln lam`.
pub fn decay_slope(k: u32, params: &ModelParams) -> f64 {
    f64::from(k) * decay_rate_per_unit_capacity(params)
}

/// Asymptotic slope of `ln P_b` against the link capacity `T` itself: `ln lam`.
pub fn decay_rate_per_unit_capacity(params: &ModelParams) -> f64 {
    params.lam().ln()
}

/// Dimensioning for one parameter set with `T_1` memoised per threshold.
///
/// Safe to share across threads.
#[derive(Debug)]
pub struct Dimensioner {
    params: ModelParams,
    t1: RwLock<HashMap<u64, u64>>,
}

impl Dimensioner {
    pub fn new(params: ModelParams) -> Self {
        Dimensioner {
            params,
            t1: RwLock::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn unshared_capacity(&self, p_threshold: f64) -> Result<u64> {
        let key = p_threshold.to_bits();
        if let Some(&t1) = self.t1.read().expect("cache lock poisoned").get(&key) {
            return Ok(t1);
        }
        let t1 = min_capacity(1, p_threshold, &self.params)?;
        self.t1
            .write()
            .expect("cache lock poisoned")
            .insert(key, t1);
        Ok(t1)
    }

    pub fn min_capacity(&self, k: u32, p_threshold: f64) -> Result<u64> {
        if k == 1 {
            self.unshared_capacity(p_threshold)
        } else {
            min_capacity(k, p_threshold, &self.params)
        }
    }

    pub fn gain(&self, k: u32, p_threshold: f64) -> Result<f64> {
        Ok(self.dimension(k, p_threshold)?.gain)
    }

    pub fn dimension(&self, k: u32, p_threshold: f64) -> Result<DimensioningResult> {
        let t1 = self.unshared_capacity(p_threshold)?;
        let t_min = self.min_capacity(k, p_threshold)?;
        Ok(DimensioningResult {
            k,
            p_threshold,
            t_min,
            t_bar: t_min as f64 / f64::from(k),
            gain: gain_from(k, t_min, t1, p_threshold)?,
        })
    }

    pub fn asymptotic_gain(&self, p_threshold: f64) -> Result<f64> {
        let t1 = self.unshared_capacity(p_threshold)?;
        if t1 == 0 {
            return Err(Error::UndefinedGain(p_threshold));
        }
        Ok(1.0 - asymptotic_capacity_per_rru(p_threshold, &self.params) / t1 as f64)
    }
}
