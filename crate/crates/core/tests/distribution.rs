use fhmux::dist::{log_pmf, mean_count, pmf, CountSampler, PmfTable};
use fhmux::sim::{stream_rng, RunningStats};
use fhmux::ModelParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const K_GRID: [u32; 7] = [1, 3, 5, 10, 20, 50, 100];

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact `P{N=n} / P{N=0} = prod_{j<n}(Ka + j) / n! * lam^n` for half-integer
/// `Ka` and rational `lam`, without any gamma function.
fn exact_ratio_to_zero(n: u32, ka_twice: i64, lam: &BigRational) -> BigRational {
    let mut acc = rational(1, 1);
    for j in 0..i64::from(n) {
        acc *= rational(ka_twice + 2 * j, 2 * (j + 1));
        acc *= lam.clone();
    }
    acc
}

#[test]
fn log_pmf_matches_exact_rational_evaluation() {
    // K = 3, Ka = 10.5, mu = 5, b = 3.5 => lam = 10/17, 1 - lam = 7/17.
    let p = ModelParams::default();
    let lam = rational(10, 17);
    let ratio = exact_ratio_to_zero(10, 21, &lam).to_f64().unwrap();
    let (ten, half) = (
        rational(7, 17).pow(10).to_f64().unwrap(),
        (7.0f64 / 17.0).sqrt(),
    );
    let expected = ratio * ten * half;
    let got = pmf(10, 3, &p);
    assert!(
        (got / expected - 1.0).abs() < 1e-12,
        "{got:e} vs {expected:e}"
    );
    assert!((log_pmf(10, 3, &p) - expected.ln()).abs() < 1e-12 * expected.ln().abs());
}

/// Negative-binomial form with a real-valued binomial coefficient, built by
/// an explicit product.
fn negative_binomial_pmf(n: u64, ka: f64, lam: f64) -> f64 {
    let log_binom: f64 = (1..=n)
        .map(|j| (ka - 1.0 + j as f64).ln() - (j as f64).ln())
        .sum();
    (log_binom + ka * (1.0 - lam).ln() + n as f64 * lam.ln()).exp()
}

#[test]
fn gamma_form_equals_negative_binomial_form() {
    for mu in [0.3, 5.0, 17.0] {
        let p = ModelParams::new(mu, 1.0).unwrap();
        for k in K_GRID {
            let ka = p.cluster_shape(k);
            for n in (0..=400u64).step_by(7) {
                let a = pmf(n, k, &p);
                let b = negative_binomial_pmf(n, ka, p.lam());
                if b < 1e-280 {
                    continue;
                }
                assert!(
                    (a / b - 1.0).abs() < 1e-11,
                    "mu={mu} k={k} n={n}: {a:e} vs {b:e}"
                );
            }
        }
    }
}

#[test]
fn normalization_and_mean_on_cluster_grid() {
    let p = ModelParams::default();
    for k in K_GRID {
        let table = PmfTable::new(k, &p);
        let mass = table.total_mass();
        assert!(
            (1.0 - 1e-9..=1.0 + 1e-12).contains(&mass),
            "k={k} mass={mass}"
        );
        assert!(table.tail_bound < 1e-12);
        let mean = table.mean();
        assert!(
            (mean / mean_count(k, &p) - 1.0).abs() < 1e-6,
            "k={k} mean={mean}"
        );
    }
}

#[test]
fn log_space_survives_far_tail() {
    let p = ModelParams::default();
    let mut prev = f64::INFINITY;
    // Mode of the K = 100 count is near 499; beyond it the PMF must decay without
    // collapsing to -inf or NaN.
    for n in (600..=1_000_000u64).step_by(9973) {
        let lp = log_pmf(n, 100, &p);
        assert!(lp.is_finite(), "n={n}");
        assert!(lp < prev, "n={n}");
        prev = lp;
    }
}

#[test]
fn sampled_mean_within_clt_band() {
    let p = ModelParams::default();
    let sampler = CountSampler::new(3, &p);
    let mut rng = stream_rng(2024, 0);
    let mut s = RunningStats::new();
    for _ in 0..1_000_000 {
        s.push(sampler.sample(&mut rng) as f64);
    }
    let e = s.estimate(2024);
    assert!(
        e.z_score(15.0).abs() < 4.0,
        "mean {} +- {}",
        e.mean,
        e.stderr
    );
}

#[test]
fn sampled_counts_pass_chi_square() {
    let p = ModelParams::default();
    let sampler = CountSampler::new(1, &p);
    let mut rng = stream_rng(7, 0);
    let draws = 1_000_000u64;
    let mut observed = [0u64; 41];
    for _ in 0..draws {
        let n = sampler.sample(&mut rng).min(40) as usize;
        observed[n] += 1;
    }
    let mut expected = [0f64; 41];
    for (n, e) in expected.iter_mut().enumerate().take(40) {
        *e = pmf(n as u64, 1, &p) * draws as f64;
    }
    expected[40] = draws as f64 - expected[..40].iter().sum::<f64>();
    let stat: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    let critical = ChiSquared::new(40.0).unwrap().inverse_cdf(0.999);
    assert!(stat < critical, "chi2 = {stat}, critical = {critical}");
}
