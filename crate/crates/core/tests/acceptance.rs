//! Acceptance criteria 1 to 10. Each test runs one suite, prints one
//! PASS/FAIL line per criterion and fails if any criterion fails.
//! The training suites take several minutes each.

use kmnet::bench::{run_suite, CriterionResult, Suite};

fn check(suite: Suite) {
    let results: Vec<CriterionResult> = run_suite(suite).unwrap_or_else(|e| panic!("suite {suite} failed to run: {e}"));
    assert_eq!(results.iter().map(|r| r.id).collect::<Vec<_>>(), suite.criteria());
    for r in &results {
        println!("{}", r.line());
        for n in &r.notes {
            println!("    {n}");
        }
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    assert!(failed.is_empty(), "criteria {failed:?} failed");
}

#[test]
fn criterion_01_tube() {
    check(Suite::Tube);
}

#[test]
fn criteria_02_03_sent() {
    check(Suite::Sent);
}

#[test]
fn criterion_04_occt() {
    check(Suite::Occt);
}

#[test]
fn criterion_05_quadrature() {
    check(Suite::Quadrature);
}

#[test]
fn criterion_06_gradients() {
    check(Suite::Gradcheck);
}

#[test]
fn criterion_07_structure() {
    check(Suite::Structure);
}

#[test]
fn criterion_08_initialization() {
    check(Suite::Init);
}

#[test]
fn criterion_09_area() {
    check(Suite::Area);
}

#[test]
fn criterion_10_determinism() {
    check(Suite::Determinism);
}
