//! Recovery CDFs for the grid-based multiply-add scheme at several oracle
//! accuracies, plus the hard-pruning baseline under a perfect oracle.
//!
//!     cargo run --release --example passgrids_cdf

use oras_sim::oracle::FaultyOracleConfig;
use oras_sim::passgrids::{pg_run, PgMode, PgPenalties};
use oras_sim::stats::cdf_at;

fn main() {
    let trials = 500u64;
    let max_obs = 2000u64;
    let penalties = PgPenalties::default();

    let mut curves = Vec::new();
    for accuracy in [1.0, 0.9, 0.8] {
        let oracle = FaultyOracleConfig::symmetric(accuracy).unwrap();
        let result = pg_run(&oracle, trials, max_obs, PgMode::Points, penalties, 5, 0);
        curves.push((format!("points @{accuracy}"), result));
    }
    let elim = pg_run(
        &FaultyOracleConfig::perfect(),
        trials,
        max_obs,
        PgMode::Elimination,
        penalties,
        5,
        9,
    );
    curves.push(("eliminate @1.0".to_string(), elim));

    println!("fraction of {trials} secrets recovered within N observations");
    print!("{:>6}", "N");
    for (label, _) in &curves {
        print!("{label:>16}");
    }
    println!();
    for n in [2u64, 4, 6, 8, 10, 15, 20, 30, 50] {
        print!("{n:>6}");
        for (_, result) in &curves {
            print!("{:>16.3}", cdf_at(&result.cdf(), n));
        }
        println!();
    }
    println!();
    for (label, result) in &curves {
        println!(
            "{label}: median {:?} observations",
            result.median().unwrap()
        );
    }
}
