//! Acceptance criteria, runnable from `fhmux validate` and from the
//! `acceptance` test target. Each criterion has a fixed tolerance and a
//! runtime budget; exceeding the budget fails the criterion.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use fhmux::blocking::{
    bound_ratio, bound_ratio_expression, check_bound_domain, log_lower_bound, log_upper_bound,
};
use fhmux::dist::PmfTable;
use fhmux::sim::{
    cell_area_fit, estimate_blocking, estimate_blocking_model, CellAreaConfig, SimConfig,
};
use fhmux::{
    asymptotic_blocking, asymptotic_capacity_per_rru, asymptotic_gain, blocking_probability, gain,
    mean_count, min_capacity, ModelParams,
};

use crate::args::SimulateArgs;
use crate::commands::simulate_rows;
use crate::config::{Format, RunConfig};
use crate::output::{render, Metadata};

const K_GRID: [u32; 7] = [1, 3, 5, 10, 20, 50, 100];

/// Outcome of one criterion's check, before timing.
#[derive(Debug, Clone)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Check {
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub params: ModelParams,
    pub seed: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            params: ModelParams::default(),
            seed: crate::config::DEFAULT_SEED,
        }
    }
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget: Duration,
    pub check: fn(&Context) -> Check,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub elapsed: Duration,
    pub budget: Duration,
    pub detail: String,
}

impl Report {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<28} {:>8.2}s / {:>4}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

impl Criterion {
    pub fn run(&self, ctx: &Context) -> Report {
        let start = Instant::now();
        let check = (self.check)(ctx);
        let elapsed = start.elapsed();
        let mut detail = check.detail;
        if elapsed > self.budget {
            detail.push_str(" [over time budget]");
        }
        Report {
            id: self.id,
            name: self.name,
            passed: check.passed && elapsed <= self.budget,
            elapsed,
            budget: self.budget,
            detail,
        }
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            name: "T1 reproduction",
            budget: secs(1),
            check: t1_reproduction,
        },
        Criterion {
            id: 2,
            name: "T5 reproduction",
            budget: secs(1),
            check: t5_reproduction,
        },
        Criterion {
            id: 3,
            name: "gain reproduction",
            budget: secs(1),
            check: gain_reproduction,
        },
        Criterion {
            id: 4,
            name: "bound sandwich",
            budget: secs(10),
            check: bound_sandwich,
        },
        Criterion {
            id: 5,
            name: "bound tightness trend",
            budget: secs(5),
            check: bound_tightness,
        },
        Criterion {
            id: 6,
            name: "decay slope",
            budget: secs(5),
            check: decay_slope_check,
        },
        Criterion {
            id: 7,
            name: "large-cluster convergence",
            budget: secs(10),
            check: large_cluster_convergence,
        },
        Criterion {
            id: 8,
            name: "distribution identities",
            budget: secs(5),
            check: distribution_identities,
        },
        Criterion {
            id: 9,
            name: "Monte Carlo consistency",
            budget: secs(300),
            check: mc_consistency,
        },
        Criterion {
            id: 10,
            name: "cell-area validation",
            budget: secs(120),
            check: cell_area_validation,
        },
        Criterion {
            id: 11,
            name: "curve shape properties",
            budget: secs(30),
            check: shape_properties,
        },
        Criterion {
            id: 12,
            name: "determinism",
            budget: secs(120),
            check: determinism,
        },
    ]
}

/// Runs the selected criteria (all when `only` is empty) in id order.
pub fn run(ctx: &Context, only: &[u8]) -> Vec<Report> {
    criteria()
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .map(|c| c.run(ctx))
        .collect()
}

fn t1_reproduction(ctx: &Context) -> Check {
    match min_capacity(1, 0.05, &ctx.params) {
        Ok(t) => Check::new(t == 8, format!("T_1(0.05) = {t}, expected 8")),
        Err(e) => Check::new(false, e.to_string()),
    }
}

fn t5_reproduction(ctx: &Context) -> Check {
    match min_capacity(5, 0.05, &ctx.params) {
        Ok(t) => Check::new(
            t == 29,
            format!("T_5(0.05) = {t} (T_bar = {}), expected 29", t as f64 / 5.0),
        ),
        Err(e) => Check::new(false, e.to_string()),
    }
}

fn gain_reproduction(ctx: &Context) -> Check {
    match (
        gain(5, 0.05, &ctx.params),
        asymptotic_gain(0.05, &ctx.params),
    ) {
        (Ok(g5), Ok(g_inf)) => Check::new(
            (g5 - 0.275).abs() <= 1e-9 && (g_inf - 0.40625).abs() <= 1e-12,
            format!("G_5 = {g5}, G_inf = {g_inf}; expected 0.275, 0.40625"),
        ),
        (a, b) => Check::new(false, format!("{a:?} {b:?}")),
    }
}

fn bound_sandwich(ctx: &Context) -> Check {
    let p = &ctx.params;
    let (mut cases, mut lower_only, mut violations) = (0, 0, Vec::new());
    for k in [1u32, 3, 5, 10, 20] {
        for t in 3..=60u64 {
            if check_bound_domain(k, t, p).is_err() {
                continue;
            }
            cases += 1;
            let series = blocking_probability(k, t, p).log_value;
            let lower = log_lower_bound(k, t, p).expect("inside the domain");
            if lower.partial_cmp(&series) != Some(Ordering::Less) {
                violations.push((k, t, "lower"));
            }
            match log_upper_bound(k, t, p).expect("inside the domain") {
                Some(upper) if series.partial_cmp(&upper) != Some(Ordering::Less) => {
                    violations.push((k, t, "upper"))
                }
                Some(_) => {}
                None => lower_only += 1,
            }
        }
    }
    Check::new(
        cases == 290 && violations.is_empty(),
        format!(
            "{cases} cases ({} with both bounds, {lower_only} with a degenerate upper bound), {} violations {:?}",
            cases - lower_only,
            violations.len(),
            violations.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn bound_tightness(ctx: &Context) -> Check {
    let p = &ctx.params;
    let (k, lam, ka) = (5u32, p.lam(), p.cluster_shape(5));
    let oracle = |t: f64| {
        let c = (t + 1.0) * (t + ka + 1.0) * lam / ((t + 2.0) * (t + 2.0));
        ((1.0 - c) / (1.0 - lam)).powi(2)
    };
    let mut detail = String::new();
    let mut ok = true;
    let mut prev = f64::NEG_INFINITY;
    for t in [10u64, 100, 1000, 10_000] {
        let expr = bound_ratio_expression(k, t, p);
        let expected = oracle(t as f64);
        ok &= (expr - expected).abs() <= 1e-12 && expr > prev;
        prev = expr;
        let implemented = bound_ratio(k, t, p).ok().flatten();
        if let Some(r) = implemented {
            let via_logs = (log_lower_bound(k, t, p).unwrap()
                - log_upper_bound(k, t, p).unwrap().unwrap())
            .exp();
            ok &= (r - expected).abs() <= 1e-12 && (via_logs - expected).abs() <= 1e-9;
        }
        let _ = write!(
            detail,
            "T={t}: {expr:.6}{} ",
            if implemented.is_some() {
                ""
            } else {
                " (upper degenerate, c>=1)"
            }
        );
    }
    ok &= prev > 0.99;
    Check::new(ok, detail.trim_end().to_string())
}

fn decay_slope_check(ctx: &Context) -> Check {
    let p = &ctx.params;
    let step =
        blocking_probability(1, 201, p).log_value - blocking_probability(1, 200, p).log_value;
    let target = (p.mu() / (p.mu() + p.b())).ln();
    Check::new(
        (step - target).abs() < 0.01,
        format!("d ln P_b at T=200: {step:.6}, ln lambda = {target:.6}"),
    )
}

fn large_cluster_convergence(ctx: &Context) -> Check {
    let p = &ctx.params;
    let limit = asymptotic_blocking(4.0, p);
    let gaps: Vec<f64> = [10u32, 20, 50, 100]
        .iter()
        .map(|&k| (blocking_probability(k, 4 * k as u64, p).value - limit).abs())
        .collect();
    Check::new(
        gaps.windows(2).all(|w| w[1] < w[0]),
        format!("|P_b(K,4K) - {limit:.3}| over K=10,20,50,100: {gaps:.5?}"),
    )
}

fn distribution_identities(ctx: &Context) -> Check {
    let p = &ctx.params;
    let mut worst_mass = 0.0f64;
    let mut worst_mean = 0.0f64;
    for k in K_GRID {
        let table = PmfTable::new(k, p);
        worst_mass = worst_mass.max((table.total_mass() - 1.0).abs());
        worst_mean = worst_mean.max((table.mean() / mean_count(k, p) - 1.0).abs());
    }
    Check::new(
        worst_mass <= 1e-9 && worst_mean <= 1e-6,
        format!("max |mass - 1| = {worst_mass:.2e}, max mean rel. error = {worst_mean:.2e}"),
    )
}

fn mc_consistency(ctx: &Context) -> Check {
    let p = &ctx.params;
    let mut ok = true;
    let mut detail = String::new();
    for (k, t) in [(1u32, 8u64), (5, 29), (10, 55)] {
        let exact = blocking_probability(k, t, p).value;
        let e = estimate_blocking_model(k, t, p, 1_000_000, ctx.seed);
        let z = e.z_score(exact);
        ok &= z.abs() < 3.0;
        let _ = write!(detail, "model ({k},{t}) z={z:+.2}; ");
    }
    for (k, t) in [(1u32, 8u64), (5, 29)] {
        let exact = blocking_probability(k, t, p).value;
        let cfg = SimConfig::for_cluster_samples(k, 1_000_000, 1000.0, ctx.seed);
        match estimate_blocking(k, t, p, &cfg) {
            Ok(e) => {
                let rel = e.mean / exact - 1.0;
                ok &= e.replications >= 1_000_000 && rel.abs() < 0.10;
                let _ = write!(
                    detail,
                    "spatial ({k},{t}) {:.5} vs {exact:.5} ({:+.2}%, n={}); ",
                    e.mean,
                    100.0 * rel,
                    e.replications
                );
            }
            Err(err) => {
                ok = false;
                let _ = write!(detail, "spatial ({k},{t}) failed: {err}; ");
            }
        }
    }
    Check::new(ok, detail.trim_end_matches("; ").to_string())
}

fn cell_area_validation(ctx: &Context) -> Check {
    let cfg = CellAreaConfig {
        seed: ctx.seed,
        ..CellAreaConfig::default()
    };
    match cell_area_fit(&ctx.params, &cfg) {
        Ok(r) => {
            let mean_err = (r.mean / r.expected_mean - 1.0).abs();
            let cv2_err = (r.cv2 / r.expected_cv2 - 1.0).abs();
            Check::new(
                mean_err <= 0.01 && cv2_err <= 0.05,
                format!(
                    "{} cells: mean {:.4} (err {:.2}%), CV^2 {:.4} vs {:.4} (err {:.2}%), KS {:.4} (informational, 0.02 expected)",
                    r.cells,
                    r.mean,
                    100.0 * mean_err,
                    r.cv2,
                    r.expected_cv2,
                    100.0 * cv2_err,
                    r.ks_distance
                ),
            )
        }
        Err(e) => Check::new(false, e.to_string()),
    }
}

fn shape_properties(ctx: &Context) -> Check {
    let p = &ctx.params;
    let mut problems = Vec::new();
    for k in K_GRID {
        let mut prev = f64::INFINITY;
        for t_bar in 1..=10u64 {
            let r = blocking_probability(k, k as u64 * t_bar, p);
            if r.value > 1e-300 && r.log_value.partial_cmp(&prev) != Some(Ordering::Less) {
                problems.push(format!("not decreasing in T_bar at K={k}, T_bar={t_bar}"));
            }
            prev = r.log_value;
        }
    }
    for t_bar in [5u64, 6, 7] {
        let values: Vec<f64> = K_GRID
            .iter()
            .map(|&k| blocking_probability(k, k as u64 * t_bar, p).log_value)
            .collect();
        if !values.windows(2).all(|w| w[1] < w[0]) {
            problems.push(format!("not decreasing in K at T_bar={t_bar}"));
        }
    }
    let floor = asymptotic_capacity_per_rru(0.05, p);
    let mut shares = Vec::new();
    for k in K_GRID {
        match min_capacity(k, 0.05, p) {
            Ok(t) => shares.push(t as f64 / f64::from(k)),
            Err(e) => problems.push(e.to_string()),
        }
    }
    if !shares.windows(2).all(|w| w[1] <= w[0]) {
        problems.push("T_min/K increases with K".into());
    }
    if shares.iter().any(|&s| s < floor) || floor != 4.75 {
        problems.push(format!("T_min/K below the {floor} limit"));
    }
    Check::new(
        problems.is_empty(),
        if problems.is_empty() {
            format!("T_min/K at 0.05: {shares:.3?}")
        } else {
            problems.join("; ")
        },
    )
}

fn determinism(ctx: &Context) -> Check {
    let args = SimulateArgs {
        cells: vec![(1, 8), (5, 29)],
        samples: 200_000,
        cluster_samples: 200_000,
        ..SimulateArgs::default()
    };
    let run = |threads: usize| -> Result<Vec<u8>, String> {
        let config = RunConfig {
            params: ctx.params,
            seed: ctx.seed,
            threads: Some(threads),
            ..RunConfig::default()
        };
        let rows = config
            .install(|| simulate_rows(&config, &args))
            .and_then(|r| r)
            .map_err(|e| e.to_string())?;
        render(&rows, &Metadata::new("simulate", &config), Format::Csv).map_err(|e| e.to_string())
    };
    match (run(1), run(1), run(4)) {
        (Ok(a), Ok(b), Ok(c)) => Check::new(
            a == b && a == c,
            format!(
                "{} bytes; repeat identical: {}, 1 vs 4 threads identical: {}",
                a.len(),
                a == b,
                a == c
            ),
        ),
        (a, b, c) => Check::new(false, format!("{:?}", [a.err(), b.err(), c.err()])),
    }
}
