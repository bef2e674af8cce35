//! One PASS/FAIL line per acceptance criterion, each with a wall-clock
//! budget.

use std::process::ExitCode;
use std::time::Instant;

use btq::cli::DEFAULT_SEED;
use btq::suites::{run_suite, SUITES};

/// `(criterion, budget in seconds)`.
const BUDGETS: [(usize, f64); 11] = [
    (1, 10.0),
    (2, 5.0),
    (3, 30.0),
    (4, 60.0),
    (5, 30.0),
    (6, 120.0),
    (7, 30.0),
    (8, 120.0),
    (9, 5.0),
    (10, 300.0),
    (11, 10.0),
];

fn main() -> ExitCode {
    let mut failures = 0;
    for (criterion, budget) in BUDGETS {
        let suite = SUITES.iter().find(|s| s.criterion == criterion).expect("every criterion has a suite");
        let start = Instant::now();
        let checks = run_suite(suite, DEFAULT_SEED);
        let secs = start.elapsed().as_secs_f64();
        let failed: Vec<_> = checks.iter().filter(|c| !c.ok).collect();
        let pass = failed.is_empty() && secs < budget;
        println!(
            "criterion {criterion}: {} [{}] {} checks, {:.2}s of {budget:.0}s",
            if pass { "PASS" } else { "FAIL" },
            suite.name,
            checks.len(),
            secs
        );
        for c in &failed {
            println!("    failed check: {}", c.name);
        }
        if secs >= budget {
            println!("    over budget");
        }
        failures += usize::from(!pass);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
