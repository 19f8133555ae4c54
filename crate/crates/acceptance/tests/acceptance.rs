//! Runs every acceptance check and prints one line per check. Pass check
//! ids as arguments to run a subset.

use std::process::ExitCode;

use polymeta_acceptance::criteria;

fn main() -> ExitCode {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for criterion in criteria() {
        if !selected.is_empty() && !selected.contains(&criterion.id) {
            continue;
        }
        let outcome = criterion.run();
        println!("{outcome}");
        if !outcome.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} checks failed");
        ExitCode::FAILURE
    }
}
