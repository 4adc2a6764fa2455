//! Acceptance criteria 1–11, one status line each. Run with `--nocapture`
//! to see the table.

use tracelab::selfcheck::{acceptance, run};

#[test]
fn acceptance_criteria() {
    let mut outcomes = Vec::new();
    for check in acceptance() {
        let o = run(&check);
        let status = if o.passed() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {:>8.2}s  {}", o.id, o.seconds, o.title);
        if let Some(why) = &o.failure {
            println!("             {why}");
        }
        outcomes.push(o);
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
