//! Monte Carlo ground truth on a torus.
//!
//! RRUs and users are independent homogeneous Poisson point processes on a
//! rectangular window with opposite edges identified, each user attaches to
//! its nearest RRU, and RRUs are grouped uniformly at random into clusters.
//! Every replication draws from its own ChaCha stream selected by
//! `(seed, replication index)`, and per-replication statistics are merged in
//! index order, so estimates do not depend on the thread count.

mod cells;
mod cluster;
mod estimate;
mod nearest;
mod ppp;
mod stats;

pub use cells::{cell_area_fit, cell_areas, CellAreaConfig, CellAreaReport};
pub use cluster::form_clusters;
pub use estimate::{estimate_blocking, estimate_blocking_model, SimConfig, SpatialScenario};
pub use nearest::{assign_nearest, assign_users, NearestIndex};
pub use ppp::sample_ppp;
pub use stats::{McEstimate, RunningStats};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A point in the window, `0 <= x < width`, `0 <= y < height`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Rectangular window `[0, width) x [0, height)` with toroidal wrap-around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub width: f64,
    pub height: f64,
}

impl Window {
    pub fn new(width: f64, height: f64) -> Self {
        assert!(
            width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite(),
            "window sides must be positive and finite"
        );
        Window { width, height }
    }

    /// Square window holding `expected` points of a process with `density` on average.
    pub fn square_for(expected: f64, density: f64) -> Self {
        let side = (expected / density).sqrt();
        Window::new(side, side)
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Squared distance under the wrap-around metric.
    pub fn dist2(&self, a: Point, b: Point) -> f64 {
        let mut dx = (a.x - b.x).abs();
        let mut dy = (a.y - b.y).abs();
        dx = dx.min(self.width - dx);
        dy = dy.min(self.height - dy);
        dx * dx + dy * dy
    }
}

/// The random stream for replication `stream` under master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
