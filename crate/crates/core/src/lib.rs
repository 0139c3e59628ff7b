//! Fronthaul statistical multiplexing for clustered remote radio units.
//!
//! RRUs and users form independent Poisson point processes; each user is
//! served by its nearest RRU, and `K` RRUs share one fronthaul link that can
//! carry at most `T` users at once. This crate evaluates the resulting user
//! blocking probability exactly and through closed-form bounds, dimensions the
//! link for a blocking target, computes the multiplexing gain and its
//! large-cluster limits, and cross-checks all of it with a stochastic-geometry
//! simulator.
//!
//! ```
//! use fhmux::{blocking_probability, min_capacity, ModelParams};
//!
//! let params = ModelParams::default(); // 5 users per RRU, a = b = 3.5
//! assert_eq!(min_capacity(1, 0.05, &params).unwrap(), 8);
//! assert_eq!(min_capacity(5, 0.05, &params).unwrap(), 29);
//!
//! let r = blocking_probability(5, 29, &params);
//! assert!(r.lower_bound.unwrap() < r.value && r.value < r.upper_bound.unwrap());
//! ```
//!
//! The guide under `book/` walks through the model chapter by chapter.

pub mod blocking;
pub mod dimensioning;
pub mod dist;
mod error;
mod params;
pub mod sim;

pub use blocking::{
    blocking_lower_bound, blocking_probability, blocking_upper_bound, term_ratio_factor,
    BlockingResult, BoundStatus,
};
pub use dimensioning::{
    asymptotic_blocking, asymptotic_capacity_per_rru, asymptotic_gain, decay_slope, gain,
    min_capacity, Dimensioner, DimensioningResult,
};
pub use dist::{log_pmf, mean_count, pmf, sample_count, PmfTable};
pub use error::{Error, Result};
pub use params::{ClusterConfig, ModelParams, DEFAULT_RATE, DEFAULT_SHAPE};

/// The guide's chapters, compiled so that every snippet in the book runs as a
/// doc-test.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/blocking.md")]
    mod blocking {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/dimensioning.md")]
    mod dimensioning {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
