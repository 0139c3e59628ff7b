use crate::error::{Error, Result};

/// Gamma shape of the typical Voronoi cell area.
pub const DEFAULT_SHAPE: f64 = 3.5;
/// Gamma rate multiplier of the typical Voronoi cell area (rate = `b * lambda_r`).
pub const DEFAULT_RATE: f64 = 3.5;

/// Densities of the two point processes and the gamma cell-area constants.
///
/// The derived quantities `mu = lambda_u / lambda_r` (mean users per RRU)
/// and `lam = mu / (mu + b)` (the geometric tail ratio of the user count)
/// are computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    lambda_u: f64,
    lambda_r: f64,
    a: f64,
    b: f64,
    mu: f64,
    lam: f64,
}

impl ModelParams {
    /// Builds a parameter set with the default gamma constants `a = b = 3.5`.
    ///
    /// `lambda_u = 0` is accepted and yields a point mass at zero users;
    /// `lambda_r` must be strictly positive.
    pub fn new(lambda_u: f64, lambda_r: f64) -> Result<Self> {
        Self::with_gamma(lambda_u, lambda_r, DEFAULT_SHAPE, DEFAULT_RATE)
    }

    pub fn with_gamma(lambda_u: f64, lambda_r: f64, a: f64, b: f64) -> Result<Self> {
        if !(lambda_u.is_finite() && lambda_u >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda_u",
                value: lambda_u,
                reason: "user density must be finite and non-negative",
            });
        }
        if !(lambda_r.is_finite() && lambda_r > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda_r",
                value: lambda_r,
                reason: "RRU density must be finite and positive",
            });
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                reason: "gamma shape must be finite and positive",
            });
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                value: b,
                reason: "gamma rate constant must be finite and positive",
            });
        }
        let mu = lambda_u / lambda_r;
        let lam = mu / (mu + b);
        Ok(ModelParams {
            lambda_u,
            lambda_r,
            a,
            b,
            mu,
            lam,
        })
    }

    /// Same gamma constants, different user density.
    pub fn with_lambda_u(&self, lambda_u: f64) -> Result<Self> {
        Self::with_gamma(lambda_u, self.lambda_r, self.a, self.b)
    }

    pub fn lambda_u(&self) -> f64 {
        self.lambda_u
    }

    pub fn lambda_r(&self) -> f64 {
        self.lambda_r
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Mean number of users per RRU.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Geometric tail ratio `mu / (mu + b)`, in `[0, 1)`.
    pub fn lam(&self) -> f64 {
        self.lam
    }

    /// Gamma shape of the summed cluster area, `K * a`.
    pub fn cluster_shape(&self, k: u32) -> f64 {
        f64::from(k) * self.a
    }

    /// True when there are no users at all.
    pub fn is_empty(&self) -> bool {
        self.lambda_u == 0.0
    }
}

impl Default for ModelParams {
    /// Five users per RRU on average, unit RRU density.
    fn default() -> Self {
        ModelParams::new(5.0, 1.0).expect("default parameters are valid")
    }
}

/// A cluster of `k` RRUs sharing one link that carries at most `t` users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClusterConfig {
    pub k: u32,
    pub t: u64,
}

impl ClusterConfig {
    pub fn new(k: u32, t: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter {
                name: "K",
                value: 0.0,
                reason: "cluster size must be at least 1",
            });
        }
        Ok(ClusterConfig { k, t })
    }

    /// Per-RRU share of the link capacity, `T / K`.
    pub fn t_bar(&self) -> f64 {
        self.t as f64 / f64::from(self.k)
    }

    /// The single-RRU, single-user configuration excluded from the bound analysis.
    pub fn is_trivial(&self) -> bool {
        self.k == 1 && self.t == 1
    }
}
