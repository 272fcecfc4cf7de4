//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::Instant;

use palindrome_lab::harness::acceptance::{run_criterion, CRITERIA};
use palindrome_lab::AcceptanceOptions;

/// Runs the full `verify-all` report at 1 and 8 threads and compares bytes.
fn determinism() -> (bool, String) {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_palindrome-lab"))
            .args(["verify-all", "--format", "json", "--threads", threads])
            .output()
            .expect("spawning palindrome-lab")
    };
    let one = run("1");
    let eight = run("8");
    let same = one.stdout == eight.stdout && !one.stdout.is_empty();
    let detail = format!(
        "{} report bytes at 1 thread, {} at 8, identical: {same}, exit codes {:?}/{:?}",
        one.stdout.len(),
        eight.stdout.len(),
        one.status.code(),
        eight.status.code()
    );
    (same, detail)
}

fn main() -> ExitCode {
    let opts = AcceptanceOptions::default();
    let mut failed = Vec::new();
    for &id in CRITERIA.iter() {
        let start = Instant::now();
        let o = run_criterion(id, &opts);
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict} {} ({:.1}s): {}", o.name, start.elapsed().as_secs_f64(), o.detail);
        if !o.passed {
            failed.push(id);
        }
    }
    let start = Instant::now();
    let (passed, detail) = determinism();
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion 10 {verdict} determinism ({:.1}s): {detail}", start.elapsed().as_secs_f64());
    if !passed {
        failed.push(10);
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
