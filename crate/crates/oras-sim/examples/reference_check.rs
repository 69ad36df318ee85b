//! Reruns the stored reference cells at a reduced iteration count and
//! prints the deviation of each fresh estimate. The full-strength version
//! of this check is the `reproduce` subcommand and the acceptance test
//! suite.
//!
//!     cargo run --release --example reference_check

use oras_sim::campaign::reproduce;

fn main() {
    let iterations = 150;
    let trials = 400;
    println!("rerunning all reference cells at {iterations} iterations / {trials} trials");
    println!(
        "{:<16} {:>10} {:>10} {:>9} {:>7}",
        "cell", "measured", "expected", "dev", "gate"
    );
    let outcomes = reproduce(&[], iterations, trials, 200_000, 3);
    let mut all_pass = true;
    for o in &outcomes {
        println!(
            "{:<16} {:>10.2} {:>10.2} {:>8.1}% {:>7}",
            o.cell.name,
            o.measured.unwrap_or(f64::NAN),
            o.cell.expected,
            o.deviation.unwrap_or(f64::NAN) * 100.0,
            if o.pass { "pass" } else { "FAIL" }
        );
        all_pass &= o.pass;
    }
    println!();
    println!("gate: {}", if all_pass { "pass" } else { "FAIL" });
}
