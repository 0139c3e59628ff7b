/// Streaming mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance with the `n - 1` denominator.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            f64::NAN
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn estimate(&self, seed: u64) -> McEstimate {
        let stderr = if self.count < 2 {
            f64::INFINITY
        } else {
            (self.variance() / self.count as f64).sqrt()
        };
        McEstimate {
            mean: if self.count == 0 { f64::NAN } else { self.mean },
            stderr,
            replications: self.count,
            seed,
        }
    }
}

/// A Monte Carlo point estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(replications)`.
    pub stderr: f64,
    /// Number of independent samples (cluster draws) averaged.
    pub replications: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `(mean - reference) / stderr`; zero when both the gap and the error vanish.
    pub fn z_score(&self, reference: f64) -> f64 {
        let gap = self.mean - reference;
        if gap == 0.0 {
            0.0
        } else {
            gap / self.stderr
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut all = RunningStats::new();
        xs.iter().for_each(|&x| all.push(x));

        let mut merged = RunningStats::new();
        for chunk in xs.chunks(77) {
            let mut part = RunningStats::new();
            chunk.iter().for_each(|&x| part.push(x));
            merged.merge(&part);
        }
        assert_eq!(merged.count(), 1000);
        assert!((merged.mean() - all.mean()).abs() < 1e-12);
        assert!((merged.variance() / all.variance() - 1.0).abs() < 1e-12);

        let naive_mean = xs.iter().sum::<f64>() / 1000.0;
        let naive_var = xs.iter().map(|x| (x - naive_mean).powi(2)).sum::<f64>() / 999.0;
        assert!((all.variance() / naive_var - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stderr_definition() {
        let mut s = RunningStats::new();
        for x in [1.0, 2.0, 3.0, 4.0] {
            s.push(x);
        }
        let e = s.estimate(9);
        assert_eq!(e.replications, 4);
        assert_eq!(e.seed, 9);
        assert!((e.stderr - (s.variance() / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_samples_have_zero_error() {
        let mut s = RunningStats::new();
        (0..10).for_each(|_| s.push(0.0));
        let e = s.estimate(0);
        assert_eq!((e.mean, e.stderr), (0.0, 0.0));
        assert_eq!(e.z_score(0.0), 0.0);
    }
}
