use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{Point, Window};

/// Homogeneous Poisson point process of the given intensity on `window`.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, window: &Window, rng: &mut R) -> Vec<Point> {
    assert!(
        density >= 0.0 && density.is_finite(),
        "density must be finite and non-negative"
    );
    let mean = density * window.area();
    if mean == 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean)
        .expect("Poisson mean is positive and finite")
        .sample(rng) as usize;
    (0..count)
        .map(|_| Point {
            x: rng.random::<f64>() * window.width,
            y: rng.random::<f64>() * window.height,
        })
        .collect()
}
