//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Fast mode by default; set `BINCAY_SLOW=1` or pass `--slow` for the
//! larger symmetric-group range.

use std::time::Instant;

use binomial_cayley::suite::{run_criterion, SuiteMode, CRITERIA};

fn main() {
    let slow = std::env::var("BINCAY_SLOW").is_ok_and(|v| v == "1") || std::env::args().any(|a| a == "--slow");
    let mode = if slow { SuiteMode::Slow } else { SuiteMode::Fast };
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    println!("acceptance suite ({mode:?} mode)");
    let mut failed = 0;
    for id in 1..=CRITERIA {
        let start = Instant::now();
        let outcome = run_criterion(id, mode);
        println!("{outcome} [{:.1}s]", start.elapsed().as_secs_f64());
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("{} of {CRITERIA} criteria passed", CRITERIA - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
