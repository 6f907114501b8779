use std::process::ExitCode;

use amfcong::suite::{run_with, SuiteOptions, DEFAULT_SEED};

fn main() -> ExitCode {
    let seed = std::env::var("AMFCONG_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let report = run_with(&SuiteOptions { seed, ..SuiteOptions::default() }, |r| println!("{r}"));
    let passed = report.results.iter().filter(|r| r.passed()).count();
    println!("{passed}/{} criteria passed", report.results.len());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
