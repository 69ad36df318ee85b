//! Session-length math: how many rounds each scheme needs so that blind
//! guessing passes a whole session with at most the target probability.
//!
//!     cargo run --release --example session_lengths

use oras_sim::scheme::{guess_success_probability, rounds_per_session, SchemeParams};

fn main() {
    let presets = [SchemeParams::bc(), SchemeParams::ft(), SchemeParams::hb()];
    for params in &presets {
        println!(
            "{}: best static guess succeeds with p = {:.6} per round",
            params.kind(),
            guess_success_probability(params)
        );
    }
    println!();
    println!(
        "{:<8} {:>10} {:>10} {:>10}",
        "scheme", "1e-4", "1e-6", "1e-8"
    );
    for params in &presets {
        let row: Vec<String> = [1e-4, 1e-6, 1e-8]
            .iter()
            .map(|&t| rounds_per_session(params, t).unwrap().to_string())
            .collect();
        println!(
            "{:<8} {:>10} {:>10} {:>10}",
            params.kind().label(),
            row[0],
            row[1],
            row[2]
        );
    }
}
