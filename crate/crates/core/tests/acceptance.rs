//! Acceptance gate: every verification criterion at its pinned tolerance.
//!
//! Run with `cargo test -p wigsim-core --test acceptance -- --nocapture` to
//! see the one-line-per-criterion report; the criteria cover constraint
//! algebra, transform correctness, closed-system rotation, the moment-ODE
//! and Fock-basis oracles, hbar^2 correction scaling, Kramers
//! thermalization, mass conservation, translational covariance, and the
//! periodic-potential free limit.

use wigsim_core::verify;

#[test]
fn acceptance_criteria() {
    let reports = verify::run_all();
    let mut failed = Vec::new();
    for report in &reports {
        println!("{}", report.line());
        if !report.passed {
            failed.push(format!("criterion {} ({})", report.id, report.name));
        }
    }
    assert_eq!(reports.len(), 10);
    assert!(
        failed.is_empty(),
        "failed acceptance criteria: {}",
        failed.join(", ")
    );
}
