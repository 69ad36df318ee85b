//! Sweeps the points-update attack over a small oracle-accuracy grid and
//! prints mean rounds to full secret recovery.
//!
//! With a perfect oracle the reference scheme falls in about 166 rounds;
//! degrading the no-modulus accuracy to 0.6 roughly doubles that. Bump
//! `ITERATIONS` for tighter estimates.
//!
//!     cargo run --release --example oracle_sweep

use oras_sim::attack::{sweep, PenaltyVectors};
use oras_sim::scheme::SchemeParams;

const ITERATIONS: u64 = 100;

fn main() {
    let params = SchemeParams::bc();
    let penalties = PenaltyVectors::for_params(&params);
    let tpr = [1.0, 0.9, 0.8];
    let tnr = [1.0, 0.8, 0.6];
    let cells = sweep(&params, &tpr, &tnr, ITERATIONS, &penalties, 200_000, 42).unwrap();

    println!(
        "{} attack, {ITERATIONS} runs per cell (mean rounds, std in parens)",
        params.kind()
    );
    print!("{:>10}", "tnr \\ tpr");
    for t in tpr {
        print!("{t:>16}");
    }
    println!();
    for (row, &tnr_value) in tnr.iter().enumerate() {
        print!("{tnr_value:>10}");
        for col in 0..tpr.len() {
            // Cells are laid out tpr-major.
            let cell = &cells[col * tnr.len() + row];
            let mean = cell.mean_rounds.unwrap();
            let std = cell.std_rounds.unwrap();
            print!("{:>16}", format!("{mean:.1} ({std:.0})"));
        }
        println!();
    }
}
