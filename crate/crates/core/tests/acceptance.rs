//! Full-size acceptance run: one PASS/FAIL line per criterion.
//!
//! `WPP_MAX_N` lowers every size bound; `WPP_SAMPLES` samples the largest
//! straightening size with `WPP_SEED`.

use std::process::ExitCode;

use wpp::acceptance::{run_suite, SuiteConfig};

fn env<T: std::str::FromStr>(key: &str) -> Option<T> {
    std::env::var(key).ok().and_then(|v| v.parse().ok())
}

fn main() -> ExitCode {
    let mut cfg = SuiteConfig::default();
    cfg.max_n = env("WPP_MAX_N");
    cfg.samples = env("WPP_SAMPLES");
    if let Some(seed) = env("WPP_SEED") {
        cfg.seed = seed;
    }
    let results = run_suite(&cfg, |r| println!("{}", r.line()));
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
