//! Acceptance suite: every verification criterion at its full bound, with
//! one pass/fail line per criterion and a wall-clock budget each. All
//! equalities inside the criteria are exact rational identities.

use sgqft_core::verify;
use std::time::Duration;

fn assert_criterion(report: verify::Report, budget: Duration) {
    println!("{}", report.line());
    assert!(report.pass, "{} failed: {}", report.name, report.detail);
    assert!(
        report.elapsed < budget,
        "{} exceeded its {:?} budget ({:?})",
        report.name,
        budget,
        report.elapsed
    );
}

#[test]
fn criterion_1_enumeration_counts() {
    assert_criterion(verify::check_enumeration(), Duration::from_secs(1));
}

#[test]
fn criterion_2_brute_force_aut_oracle() {
    assert_criterion(verify::check_aut_oracle(4), Duration::from_secs(30));
}

#[test]
fn criterion_3_operator_recursions() {
    assert_criterion(verify::check_recursions(4), Duration::from_secs(120));
}

#[test]
fn criterion_4_duality() {
    assert_criterion(verify::check_duality(4), Duration::from_secs(120));
}

#[test]
fn criterion_5_fourier_transforms() {
    assert_criterion(verify::check_transforms(4), Duration::from_secs(60));
}

#[test]
fn criterion_6_realization() {
    assert_criterion(verify::check_realization(4), Duration::from_secs(60));
}

#[test]
fn criterion_7_gaussian_oracle() {
    assert_criterion(verify::check_gaussian(4), Duration::from_secs(120));
}

#[test]
fn criterion_8_group_law() {
    assert_criterion(verify::check_grouplaw(4), Duration::from_secs(60));
}

#[test]
fn criterion_9_holomorphic_anomaly() {
    assert_criterion(verify::check_hae(4), Duration::from_secs(120));
}
