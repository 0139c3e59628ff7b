use fhmux::dimensioning::decay_rate_per_unit_capacity;
use fhmux::{
    asymptotic_blocking, asymptotic_capacity_per_rru, asymptotic_gain, blocking_probability,
    decay_slope, gain, min_capacity, Dimensioner, ModelParams,
};

const K_GRID: [u32; 7] = [1, 3, 5, 10, 20, 50, 100];

#[test]
fn reported_operating_point() {
    let p = ModelParams::default();
    assert_eq!(min_capacity(1, 0.05, &p).unwrap(), 8);
    assert_eq!(min_capacity(5, 0.05, &p).unwrap(), 29);
    assert!((gain(5, 0.05, &p).unwrap() - 0.275).abs() < 1e-9);
    assert!((asymptotic_gain(0.05, &p).unwrap() - 0.40625).abs() < 1e-12);
}

#[test]
fn intermediate_cluster_gain_is_bracketed() {
    let p = ModelParams::default();
    let g10 = gain(10, 0.05, &p).unwrap();
    assert!(g10 > 0.275 && g10 < 0.40625, "{g10}");
    let g100 = gain(100, 0.05, &p).unwrap();
    assert!((g100 - 0.40625).abs() < 0.05, "{g100}");
}

#[test]
fn capacity_brackets_threshold() {
    let p = ModelParams::default();
    for th in [0.01, 0.05, 0.2] {
        for k in K_GRID {
            let t = min_capacity(k, th, &p).unwrap();
            assert!(blocking_probability(k, t, &p).value <= th);
            if t > 0 {
                assert!(blocking_probability(k, t - 1, &p).value > th);
            }
        }
    }
}

#[test]
fn gain_and_share_trends_on_grid() {
    let d = Dimensioner::new(ModelParams::default());
    let limit = d.asymptotic_gain(0.05).unwrap();
    let rows: Vec<_> = K_GRID
        .iter()
        .map(|&k| d.dimension(k, 0.05).unwrap())
        .collect();
    for w in rows.windows(2) {
        assert!(w[1].gain >= w[0].gain);
        assert!(w[1].t_bar <= w[0].t_bar);
    }
    for r in &rows {
        assert!(r.gain < limit);
        assert!(r.t_bar >= 4.75);
    }
}

#[test]
fn share_can_undercut_the_limit_at_loose_thresholds() {
    // At 0.2 the limit (1 - p) mu = 4 sits close to T_bar values whose large-K
    // blocking is approached from below, so finite clusters can beat it.
    let p = ModelParams::default();
    assert_eq!(asymptotic_capacity_per_rru(0.2, &p), 4.0);
    assert_eq!(min_capacity(20, 0.2, &p).unwrap(), 79);
    assert_eq!(min_capacity(50, 0.2, &p).unwrap(), 199);
}

#[test]
fn blocking_converges_to_large_cluster_limit() {
    let p = ModelParams::default();
    let limit = asymptotic_blocking(4.0, &p);
    assert!((limit - 0.2).abs() < 1e-15);
    let gaps: Vec<f64> = [10u32, 20, 50, 100]
        .iter()
        .map(|&k| (blocking_probability(k, 4 * k as u64, &p).value - limit).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn log_blocking_slope_approaches_ln_lambda() {
    let p = ModelParams::default();
    let step =
        blocking_probability(1, 201, &p).log_value - blocking_probability(1, 200, &p).log_value;
    let target = (5.0f64 / 8.5).ln();
    assert!((step - target).abs() < 0.01, "{step} vs {target}");
    assert_eq!(decay_rate_per_unit_capacity(&p), target);
    assert!((decay_slope(1, &p) + 0.530_628_251_062_170_4).abs() < 1e-12);
    for k in [3u32, 10] {
        assert_eq!(decay_slope(k, &p), k as f64 * decay_slope(1, &p));
    }
}

#[test]
fn dimensioner_is_shareable() {
    let d = std::sync::Arc::new(Dimensioner::new(ModelParams::default()));
    let handles: Vec<_> = (0..4)
        .map(|i| {
            let d = d.clone();
            std::thread::spawn(move || d.gain(1 + 2 * i, 0.05).unwrap())
        })
        .collect();
    let gains: Vec<f64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert_eq!(gains[0], 0.0);
    assert!((gains[2] - 0.275).abs() < 1e-12);
}
