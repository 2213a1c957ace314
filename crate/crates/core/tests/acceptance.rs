//! Acceptance gate: every quantitative guarantee of the toolkit, checked at
//! full tolerance. Each test prints exactly one verdict line; run with
//! `cargo test --test acceptance -- --nocapture` to see all seven.

use ordermin::acceptance::{self, CriterionOutcome};

fn check(outcome: CriterionOutcome) {
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn direction_estimate_accuracy() {
    check(acceptance::direction_estimate_accuracy());
}

#[test]
fn query_budget_accounting() {
    check(acceptance::query_budget_accounting());
}

#[test]
fn exact_descent_bound() {
    check(acceptance::exact_descent_bound());
}

#[test]
fn comparison_descent_target() {
    check(acceptance::comparison_descent_target());
}

#[test]
fn preference_test_soundness() {
    check(acceptance::preference_test_soundness());
}

#[test]
fn projection_metric_properties() {
    check(acceptance::projection_metric_properties());
}

#[test]
fn csv_reproducibility() {
    check(acceptance::csv_reproducibility());
}
