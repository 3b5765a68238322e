//! Acceptance battery: one test per verification criterion, each printing
//! its pass/fail line (run with `--nocapture` to see them all).

use bchubbard::verify::{self, CheckReport, VerifyConfig};

fn assert_check(report: CheckReport) {
    println!("{}", report.line());
    assert!(report.passed, "{}", report.line());
}

fn cfg() -> VerifyConfig {
    VerifyConfig::default()
}

#[test]
fn criterion_01_phase_diagram() {
    assert_check(verify::check_phase_diagram(&cfg()));
}

#[test]
fn criterion_02_xstate_oracle_equivalence() {
    assert_check(verify::check_xstate_oracle(&cfg()));
}

#[test]
fn criterion_03_region3_closed_form() {
    assert_check(verify::check_region3_closed_form(&cfg()));
}

#[test]
fn criterion_04_kspace_identities() {
    assert_check(verify::check_kspace_identities(&cfg()));
}

#[test]
fn criterion_05_region1_critical_exponents() {
    assert_check(verify::check_region1_exponents(&cfg()));
}

#[test]
fn criterion_06_region2_critical_exponents() {
    assert_check(verify::check_region2_exponents(&cfg()));
}

#[test]
fn criterion_07_decay_and_maxima_laws() {
    assert_check(verify::check_decay_and_maxima(&cfg()));
}

#[test]
fn criterion_08_monogamy() {
    assert_check(verify::check_monogamy(&cfg()));
}

#[test]
fn criterion_09_boundary_continuity() {
    assert_check(verify::check_boundary_continuity(&cfg()));
}

#[test]
fn criterion_10_rdm_oracles() {
    assert_check(verify::check_rdm_oracles(&cfg()));
}
