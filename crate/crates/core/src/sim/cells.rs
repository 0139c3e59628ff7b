use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Gamma};

use crate::error::{Error, Result};
use crate::params::ModelParams;

use super::{sample_ppp, stream_rng, NearestIndex, Point, RunningStats, Window};

/// Settings for the Voronoi cell-area check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellAreaConfig {
    /// Independent windows.
    pub windows: usize,
    /// Expected RRUs per window; at least 100.
    pub window_rrus: f64,
    /// Integration pixels per mean cell area.
    pub pixels_per_cell: f64,
    pub seed: u64,
}

impl Default for CellAreaConfig {
    fn default() -> Self {
        CellAreaConfig {
            windows: 100,
            window_rrus: 1000.0,
            pixels_per_cell: 100.0,
            seed: 42,
        }
    }
}

/// Empirical cell-area moments against the gamma approximation
/// `Gamma(a, scale 1/(b lambda_r))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellAreaReport {
    pub cells: usize,
    pub mean: f64,
    pub variance: f64,
    /// `variance / mean^2`.
    pub cv2: f64,
    /// Kolmogorov-Smirnov distance to the gamma fit.
    pub ks_distance: f64,
    /// `1 / lambda_r`.
    pub expected_mean: f64,
    /// `1 / a`.
    pub expected_cv2: f64,
}

/// Cell areas of one RRU draw, integrated by assigning every pixel centre of
/// a uniform grid to its nearest RRU.
pub fn cell_areas(
    rrus: &[Point],
    window: &Window,
    pixels_per_side: (usize, usize),
) -> Result<Vec<f64>> {
    let index = NearestIndex::new(rrus, *window)?;
    let (nx, ny) = pixels_per_side;
    let (pw, ph) = (window.width / nx as f64, window.height / ny as f64);
    let mut counts = vec![0u64; rrus.len()];
    for j in 0..ny {
        let y = (j as f64 + 0.5) * ph;
        for i in 0..nx {
            let x = (i as f64 + 0.5) * pw;
            counts[index.nearest(Point { x, y })] += 1;
        }
    }
    Ok(counts.into_iter().map(|c| c as f64 * pw * ph).collect())
}

pub fn cell_area_fit(params: &ModelParams, config: &CellAreaConfig) -> Result<CellAreaReport> {
    if config.window_rrus.is_nan() || config.window_rrus < 100.0 {
        return Err(Error::Config(format!(
            "cell-area fit needs at least 100 expected RRUs per window, got {}",
            config.window_rrus
        )));
    }
    let lambda_r = params.lambda_r();
    let window = Window::square_for(config.window_rrus, lambda_r);
    let side_pixels = (config.window_rrus * config.pixels_per_cell).sqrt().ceil() as usize;

    let per_window: Vec<Vec<f64>> = (0..config.windows as u64)
        .into_par_iter()
        .map(|w| {
            let mut rng = stream_rng(config.seed, w);
            let rrus = sample_ppp(lambda_r, &window, &mut rng);
            if rrus.is_empty() {
                return Vec::new();
            }
            cell_areas(&rrus, &window, (side_pixels, side_pixels)).expect("RRU set is non-empty")
        })
        .collect();

    let mut areas: Vec<f64> = per_window.into_iter().flatten().collect();
    let mut stats = RunningStats::new();
    areas.iter().for_each(|&a| stats.push(a));

    let fit = Gamma::new(params.a(), params.b() * lambda_r).expect("gamma parameters are positive");
    areas.sort_by(f64::total_cmp);
    let n = areas.len() as f64;
    let ks_distance = areas
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = fit.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);

    let mean = stats.mean();
    let variance = stats.variance();
    Ok(CellAreaReport {
        cells: areas.len(),
        mean,
        variance,
        cv2: variance / (mean * mean),
        ks_distance,
        expected_mean: 1.0 / lambda_r,
        expected_cv2: 1.0 / params.a(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn areas_partition_the_window() {
        let w = Window::new(10.0, 8.0);
        let mut rng = stream_rng(11, 0);
        let rrus = sample_ppp(2.0, &w, &mut rng);
        let areas = cell_areas(&rrus, &w, (200, 160)).unwrap();
        let total: f64 = areas.iter().sum();
        assert!((total - w.area()).abs() < 1e-9);
    }

    #[test]
    fn small_windows_rejected() {
        let cfg = CellAreaConfig {
            window_rrus: 50.0,
            ..CellAreaConfig::default()
        };
        assert!(cell_area_fit(&ModelParams::default(), &cfg).is_err());
    }
}
