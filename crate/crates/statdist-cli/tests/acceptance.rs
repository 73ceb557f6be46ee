//! Acceptance gate: each numbered criterion runs its verification suite at
//! the pinned tolerances and prints one pass/fail line. The suites live in
//! `statdist::suites`; the tolerances are constants there, not knobs.

use statdist::suites::{self, SuiteConfig};
use std::process::Command;
use std::time::{Duration, Instant};

fn report_line(criterion: usize, name: &str, passed: bool) {
    println!(
        "criterion {criterion:>2} [{}]: {name}",
        if passed { "PASS" } else { "FAIL" }
    );
}

fn assert_suite(
    criterion: usize,
    name: &str,
    budget: Option<Duration>,
    suite: impl Fn(&SuiteConfig) -> suites::SuiteReport,
) {
    let config = SuiteConfig::new(0);
    let start = Instant::now();
    let report = suite(&config);
    let elapsed = start.elapsed();
    report_line(criterion, name, report.passed);
    assert!(
        report.passed,
        "criterion {criterion} failed: {:?}",
        report.failures
    );
    if let Some(budget) = budget {
        assert!(
            elapsed <= budget,
            "criterion {criterion} took {elapsed:?}, budget {budget:?}"
        );
    }
}

#[test]
fn criterion_01_symmetric_chisq_metric() {
    assert_suite(
        1,
        "symmetric chi-squared metric axioms over 1000 triples",
        Some(Duration::from_secs(5)),
        suites::s2_metric_suite,
    );
}

#[test]
fn criterion_02_hellinger_sandwich() {
    assert_suite(
        2,
        "S^2/8 <= H^2 <= S^2/4 over 1000 pairs with singular witnesses",
        None,
        suites::hellinger_sandwich_suite,
    );
}

#[test]
fn criterion_03_sup_characterization() {
    assert_suite(
        3,
        "mean-separation supremum and extremal function attainment",
        None,
        suites::sup_characterization_suite,
    );
}

#[test]
fn criterion_04_optimization_form_oracles() {
    assert_suite(
        4,
        "brute-force constrained optimization reproduces kl and bwhd",
        None,
        suites::optimization_dual_suite,
    );
}

#[test]
fn criterion_05_bayes_risk_identity() {
    assert_suite(
        5,
        "per-cell risk minimization equals (1/4)(1 - S^2/4)",
        None,
        suites::bayes_risk_suite,
    );
}

#[test]
fn criterion_06_power_divergence_collapses() {
    assert_suite(
        6,
        "power-divergence special cases and limit continuity",
        None,
        suites::power_collapse_suite,
    );
}

#[test]
fn criterion_07_quadratic_form_equivalences() {
    assert_suite(
        7,
        "diagonal-kernel and smoothed-kernel quadratic forms",
        Some(Duration::from_secs(60)),
        suites::quadratic_form_suite,
    );
}

#[test]
fn criterion_08_ks_invariance_and_discretization() {
    assert_suite(
        8,
        "ks monotone invariance, 1/(2N) profile, and L2 non-invariance",
        None,
        suites::ks_suite,
    );
}

#[test]
fn criterion_09_estimation_recovery_and_robustness() {
    assert_suite(
        9,
        "self-fit recovery and the contamination-shift contrast",
        Some(Duration::from_secs(30)),
        suites::estimation_suite,
    );
}

#[test]
fn criterion_10_selftest_exits_zero_under_ten_seeds() {
    for seed in 0..10u64 {
        let output = Command::new(env!("CARGO_BIN_EXE_statdist"))
            .args(["selftest", "--seed", &seed.to_string()])
            .output()
            .expect("selftest runs");
        assert!(
            output.status.success(),
            "selftest failed under seed {seed}:\n{}\n{}",
            String::from_utf8_lossy(&output.stdout),
            String::from_utf8_lossy(&output.stderr),
        );
    }
    report_line(10, "selftest exits 0 under 10 distinct seeds", true);
}
