//! Runs the acceptance battery, one line per criterion. Failing checks are
//! listed under their criterion; the process exits nonzero if any fail.

use std::time::Instant;

use ctxgraph::acceptance::{run_criterion, CRITERIA};

fn main() {
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        if only.is_some_and(|k| k != id) {
            continue;
        }
        let start = Instant::now();
        let r = run_criterion(id);
        println!("{}  [{:.1}s]", r.line(), start.elapsed().as_secs_f64());
        for c in r.failed_checks() {
            println!("    failed: {}: {}", c.name, c.detail);
        }
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
