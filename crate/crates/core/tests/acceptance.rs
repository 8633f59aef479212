//! The acceptance suite as a test target: one test per criterion, each
//! printing its verdict line and asserting both the checks and the runtime
//! budget. Run with `cargo test --test acceptance`.

use grouptower::acceptance::{run_criterion, CriterionResult};

const SEED: u64 = 0;

fn run(id: usize) -> CriterionResult {
    let result = run_criterion(id, SEED).expect("criterion id in range");
    println!("{}", result.summary_line());
    for line in &result.details {
        println!("    {line}");
    }
    result
}

fn assert_criterion(result: &CriterionResult) {
    assert!(
        result.passed,
        "criterion {} failed:\n{}",
        result.id,
        result.details.join("\n")
    );
    assert!(
        result.within_budget(),
        "criterion {} exceeded its {}s budget: {:.2}s",
        result.id,
        result.budget_seconds,
        result.seconds
    );
}

#[test]
fn criterion_1_tower_structure() {
    assert_criterion(&run(1));
}

#[test]
fn criterion_2_burnside_oracles() {
    assert_criterion(&run(2));
}

#[test]
fn criterion_3_auxiliary_scaffolding() {
    assert_criterion(&run(3));
}

#[test]
fn criterion_4_power_relation_certificates() {
    assert_criterion(&run(4));
}

#[test]
fn criterion_5_kernel_agreement() {
    assert_criterion(&run(5));
}

#[test]
fn criterion_6_britton_engine() {
    assert_criterion(&run(6));
}

#[test]
fn criterion_7_diagram_suite() {
    assert_criterion(&run(7));
}

#[test]
fn criterion_8_determinism() {
    assert_criterion(&run(8));
}
