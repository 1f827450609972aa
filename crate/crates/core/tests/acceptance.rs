//! One PASS/FAIL line per acceptance criterion, run sequentially. Runs
//! without the libtest harness so the lines are never captured.

use orbitlab::checks::run_check;

fn main() {
    let mut failed = Vec::new();
    for id in 1..=10 {
        let r = run_check(id);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
