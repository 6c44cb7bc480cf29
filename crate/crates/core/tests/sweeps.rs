use rigphase::branching::zeta_star;
use rigphase::harness::{giant_gap_scan, verify_theorems, SweepConfig};
use rigphase::run_sweep;

#[test]
fn linear_giant_matches_prediction() {
    let n = 100_000;
    let cfg = SweepConfig::example2(n, 1.0, 2.0, 2.0, 1, 20, 31);
    let out = run_sweep(&cfg, None).unwrap();
    let mean_frac = out.records.iter().map(|r| r.l1 as f64).sum::<f64>() / (20.0 * n as f64);
    let s = 2f64.sqrt();
    assert!(
        (mean_frac - (1.0 - zeta_star(s, s))).abs() < 0.02,
        "mean L1/n = {mean_frac}"
    );
    let report = verify_theorems(&out.records, &cfg.hypotheses());
    assert!(report.passed, "{report:#?}");
    assert_eq!(report.theorem2.unwrap().enforced_points, 1);
}

#[test]
fn subcritical_components_stay_logarithmic() {
    let n = 100_000;
    let out = run_sweep(&SweepConfig::example2(n, 1.0, 0.5, 0.5, 1, 20, 32), None).unwrap();
    let max_l1 = out.records.iter().map(|r| r.l1).max().unwrap();
    assert!(max_l1 as f64 <= 50.0 * (n as f64).ln());
    assert!(out.records.iter().all(|r| r.rho_pred == 1.0));
}

#[test]
fn jump_across_criticality_linear() {
    let out = run_sweep(
        &SweepConfig::example2(100_000, 1.0, 0.5, 1.5, 3, 9, 33),
        None,
    )
    .unwrap();
    let gap = giant_gap_scan(&out.records, 0.5);
    assert!(!gap.incomplete);
    // observed ratio when pinned: about 1e3
    assert!(gap.ratio.unwrap() >= 100.0, "{gap:?}");
    assert!(gap.above_fraction.unwrap() > 0.2);
}

#[test]
fn jump_lands_at_inverse_p_scale_for_few_attributes() {
    let n = 100_000;
    let cfg = SweepConfig::example1(n, 0.5, 0.0, 2.0, 2, 9, 34);
    let out = run_sweep(&cfg, None).unwrap();
    let gap = giant_gap_scan(&out.records, 1.0);
    let (c, median) = gap.above.unwrap();
    let p = (c / (cfg.m() as f64 * n as f64)).sqrt();
    // Theta(1 / p) ~ 3.5e3 rather than Theta(n)
    let scaled = median * p;
    assert!((0.1..10.0).contains(&scaled), "median L1 p = {scaled}");
    assert!(median < 0.2 * n as f64);
    assert_eq!(gap.below, Some((0.0, 1.0)));
}

#[test]
fn every_record_is_consistent() {
    let out = run_sweep(
        &SweepConfig::example1(30_000, 0.7, 0.2, 3.0, 8, 4, 35),
        None,
    )
    .unwrap();
    for r in &out.records {
        assert!(r.l1 >= r.l2 && r.l1 + r.l2 <= r.n);
        assert!((0.0..=1.0).contains(&r.rho_pred));
        if r.c < 0.99 {
            assert_eq!(r.rho_pred, 1.0);
        }
    }
}
