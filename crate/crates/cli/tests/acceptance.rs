//! The acceptance gate. Run with `cargo test -p fhmux-cli --test acceptance
//! -- --nocapture` to see one line per criterion.

use fhmux::ModelParams;
use fhmux_cli::validate::{criteria, run, Context};

#[test]
fn every_criterion_passes() {
    let reports = run(&Context::default(), &[]);
    assert_eq!(reports.len(), 12);
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn corrupted_shape_constant_is_caught() {
    let ctx = Context {
        params: ModelParams::with_gamma(5.0, 1.0, 3.0, 3.5).unwrap(),
        ..Context::default()
    };
    let t1 = &criteria()[0];
    assert_eq!(t1.id, 1);
    let report = t1.run(&ctx);
    println!("{}", report.line());
    assert!(!report.passed);
    assert!(report.detail.contains("= 7"));
}

#[test]
fn reports_carry_runtime() {
    let reports = run(&Context::default(), &[1, 2, 8]);
    assert_eq!(
        reports.iter().map(|r| r.id).collect::<Vec<_>>(),
        vec![1, 2, 8]
    );
    assert!(reports.iter().all(|r| r.elapsed <= r.budget));
    assert!(reports[0].line().contains("s /"));
}
