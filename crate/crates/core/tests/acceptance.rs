//! Release gate: the ten verification criteria, one line each, all of
//! which must pass. Budgeted criteria fail when they exceed their wall
//! clock allowance (the budgets live next to the checks).

use univjac_core::verify::run_all;

#[test]
fn acceptance() {
    let results = run_all(None);
    assert_eq!(results.len(), 10, "expected exactly ten criteria");
    let mut failed = 0usize;
    for r in &results {
        println!(
            "criterion {:>2}: {} [{:>5} ms] {} - {}",
            r.index,
            if r.passed { "PASS" } else { "FAIL" },
            r.millis,
            r.name,
            r.detail
        );
        if !r.passed {
            failed += 1;
        }
    }
    assert_eq!(failed, 0, "{failed} of 10 acceptance criteria failed");
}
