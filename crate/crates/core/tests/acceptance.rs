//! Acceptance run: one line per criterion plus the scaling smoke check.
//!
//! Runs without the libtest harness so the lines always reach the output.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use syncgame::suites::{run_suite, Suite};

/// Checks that fail when run as written, with the reason. The start pair
/// {⌈n/2⌉+1, 1} of the backward Hamiltonian word only works for even n; for
/// odd n the word is Hamiltonian from {⌊n/2⌋+1, 1} (checked in the unit tests
/// of `families`). These stay failing in the report.
const KNOWN_FAILURES: [(&str, &str); 4] = [
    ("w_backward(3) from {0,1}", "odd n"),
    ("w_backward(5) from {4,1}", "odd n"),
    ("w_backward(7) from {5,1}", "odd n"),
    ("w_backward(9) from {6,1}", "odd n"),
];

fn main() -> ExitCode {
    let known: BTreeSet<&str> = KNOWN_FAILURES.iter().map(|(name, _)| *name).collect();
    let mut unexpected = Vec::new();
    let start = Instant::now();
    for suite in Suite::EACH {
        let report = run_suite(suite).remove(0);
        let label = match suite.criterion() {
            Some(c) => format!("criterion {c:>2} {suite}"),
            None => format!("smoke check  {suite}"),
        };
        let failures: Vec<_> = report.failures().collect();
        let status = if failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "{label:<40} {status}  ({} checks, {} failed, {:.2?})",
            report.checks.len(),
            failures.len(),
            report.elapsed()
        );
        for f in &failures {
            let tag = if known.contains(f.name.as_str()) {
                "known"
            } else {
                unexpected.push(f.name.clone());
                "NEW"
            };
            println!("    [{tag}] {}: {}", f.name, f.detail);
        }
        for c in report.checks.iter().filter(|c| c.passed && known.contains(c.name.as_str())) {
            unexpected.push(format!("{} now passes; update KNOWN_FAILURES", c.name));
        }
    }
    println!("acceptance finished in {:.2?}", start.elapsed());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected results: {unexpected:?}");
        ExitCode::FAILURE
    }
}
