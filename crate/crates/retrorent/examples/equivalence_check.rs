//! Run the randomized property suites at a moderate budget: window-scan vs
//! potential retro-renting, the offline DP against exhaustive enumeration,
//! and the bound-consistency check.
//!
//! ```sh
//! cargo run --release --example equivalence_check
//! ```

use retrorent::verify::{run_suite, Suite};

fn main() {
    for (suite, budget) in [
        (Suite::Equivalence, 2_000),
        (Suite::Oracle, 2_000),
        (Suite::BoundsConsistency, 2_000),
    ] {
        let report = run_suite(suite, budget, 0xD1CE);
        let status = if report.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} {suite}: {} instances, {} checks",
            report.instances, report.checks
        );
        for failure in &report.failures {
            println!("  {failure}");
        }
        if let Some(ce) = &report.counterexample {
            println!("  minimized counterexample: {ce}");
        }
    }
}
