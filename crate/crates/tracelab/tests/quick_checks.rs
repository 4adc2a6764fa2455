use tracelab::selfcheck::{quick, run};

#[test]
fn quick_checks_pass() {
    for check in quick() {
        let o = run(&check);
        assert!(o.passed(), "{} ({}): {}", o.id, o.title, o.failure.unwrap_or_default());
    }
}
