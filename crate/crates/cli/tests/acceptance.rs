//! Runs every acceptance suite and prints one line per criterion. The process fails if a
//! criterion fails for any reason other than the one claim known to be unattainable.

use std::process::ExitCode;
use std::time::Instant;

use htk_cli::suites::{run_suite, SUITES};

/// The field-theory count equals the number of isomorphisms, not of objects, as soon as a
/// category has a non-identity isomorphism.
const KNOWN_RED: &[(&str, &str)] = &[("bgraded-bases", "field theories are the objects")];

fn main() -> ExitCode {
    let mut unexpected = 0;
    for (i, suite) in SUITES.iter().enumerate() {
        let start = Instant::now();
        let report = run_suite(suite).expect("listed suite");
        let failed: Vec<_> = report.claims.iter().filter(|c| !c.passed).collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        let ok = report.claims.len() - failed.len();
        println!(
            "criterion {:>2} {status} {suite}: {ok}/{} claims ({:.1}s)",
            i + 1,
            report.claims.len(),
            start.elapsed().as_secs_f64()
        );
        for c in failed {
            let known = KNOWN_RED.contains(&(*suite, c.name.as_str()));
            println!("    {c}{}", if known { " [known unattainable]" } else { "" });
            unexpected += usize::from(!known);
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    }
}
