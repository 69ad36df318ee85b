//! PIN recovery against the one-time-pad scheme. The transcript alone is
//! worthless (it is a one-time pad), yet a carry/no-carry side channel
//! recovers a 4-digit PIN in a few dozen rounds.
//!
//!     cargo run --release --example mod10_recovery

use oras_sim::mod10::mod10_run;
use oras_sim::oracle::FaultyOracleConfig;
use oras_sim::stats::cdf_at;

fn main() {
    let trials = 1000u64;
    println!("{trials} random 4-digit PINs per accuracy");
    println!(
        "{:>9} {:>12} {:>10} {:>14} {:>14}",
        "accuracy", "mean rounds", "std", "80% within", "95% within"
    );
    for (cell, accuracy) in [1.0f64, 0.9, 0.8, 0.7, 0.6].into_iter().enumerate() {
        let oracle = FaultyOracleConfig::symmetric(accuracy).unwrap();
        let result = mod10_run(4, &oracle, trials, 100_000, 11, cell);
        let cdf = result.cdf();
        let quantile = |q: f64| {
            let mut n = 0;
            while cdf_at(&cdf, n) < q {
                n += 1;
            }
            n
        };
        println!(
            "{accuracy:>9} {:>12.1} {:>10.1} {:>14} {:>14}",
            result.mean_rounds.unwrap(),
            result.std_rounds.unwrap(),
            quantile(0.80),
            quantile(0.95)
        );
    }
}
