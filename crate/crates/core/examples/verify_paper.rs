//! Runs the verification suite, optionally filtered by a case-id glob.

use finring::harness::{verify_paper_with, RunConfig};

fn main() -> Result<(), String> {
    let filter = std::env::args().nth(1);
    let report = verify_paper_with(RunConfig::default(), filter.as_deref())?;
    for c in &report.cases {
        println!(
            "{} {:<40} {}",
            if c.passed() { "PASS" } else { "FAIL" },
            c.id,
            c.observed
        );
    }
    println!("pass = {}", report.pass);
    Ok(())
}
