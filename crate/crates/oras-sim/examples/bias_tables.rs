//! Prints the exact modulus-event analysis for the three scheme presets:
//! how likely each response value is to hide a modular reduction, and how
//! the expected secret-item weight shifts once the event is known.
//!
//!     cargo run --release --example bias_tables

use oras_sim::bias::{
    aggregate_expected_weight, conditional_expected_weight, prob_mod_event, response_bias_table,
    WeightEvent,
};
use oras_sim::scheme::SchemeParams;

fn main() {
    for params in [SchemeParams::bc(), SchemeParams::ft(), SchemeParams::hb()] {
        let (n, k, l, d) = (params.n(), params.k(), params.l(), params.d());
        println!("== {} (n={n}, k={k}, l={l}, d={d}) ==", params.kind());

        println!("no-modulus probability by secret count:");
        for g in 1..=8u32 {
            let (no_mod, _) = prob_mod_event(g, d);
            print!("  g={g}: {no_mod:.4}");
        }
        println!();

        let table = response_bias_table(&params);
        println!("Pr(modulus | response), aggregated over challenges:");
        for row in &table.aggregate {
            println!(
                "  r={}: p_mod={:.4} p_no_mod={:.4} (response seen {:.4})",
                row.response, row.p_mod, row.p_no_mod, row.p_response
            );
        }

        println!(
            "expected secret-item weight (overall {:.2}):",
            f64::from(d - 1) / 2.0
        );
        print!("  no-modulus:");
        for g in 1..=9u32 {
            let e = conditional_expected_weight(g, d, WeightEvent::NoModulus).unwrap();
            print!(" g{g}={e:.2}");
        }
        println!(
            " | all g: {:.2}",
            aggregate_expected_weight(&params, WeightEvent::NoModulus)
        );
        print!("  modulus:   ");
        for g in 2..=9u32 {
            let e = conditional_expected_weight(g, d, WeightEvent::Modulus).unwrap();
            print!(" g{g}={e:.2}");
        }
        println!(
            " | all g: {:.2}",
            aggregate_expected_weight(&params, WeightEvent::Modulus)
        );
        println!();
    }
}
