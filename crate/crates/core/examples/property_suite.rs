//! Runs the executable property groups and prints one line per group.
//!
//! cargo run --release --example property_suite [-- seed]

use defexp::checks::run_suite;
use defexp::oracle::OracleConfig;

fn main() -> defexp::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(OracleConfig::from_env().seed);
    let report = run_suite(seed, &[])?;
    for c in &report.criteria {
        println!("{}", c.summary_line());
        for check in &c.checks {
            println!("    {:<60} worst {:>10.3e} bound {:>8.1e}", check.label, check.worst, check.bound);
        }
    }
    println!("seed {seed}: {}", if report.passed { "all groups pass" } else { "failures" });
    Ok(())
}
