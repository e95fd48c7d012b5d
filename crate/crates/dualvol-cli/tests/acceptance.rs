//! Runs every acceptance criterion and prints one pass/fail line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use dualvol_cli::accept::{run_criteria, CRITERION_COUNT};

#[test]
fn acceptance_criteria() {
    let ids: Vec<usize> = (1..=CRITERION_COUNT).collect();
    let criteria = run_criteria(&ids, 0).expect("acceptance suite runs to completion");
    assert_eq!(criteria.len(), CRITERION_COUNT);
    let mut all = true;
    for c in &criteria {
        println!(
            "criterion {:>2} {:<28} {} ({})",
            c.id,
            c.name,
            if c.pass { "pass" } else { "FAIL" },
            c.detail
        );
        all &= c.pass;
    }
    assert!(all, "some acceptance criteria failed; see lines above");
}
