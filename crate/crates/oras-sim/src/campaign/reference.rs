//! Stored reference round counts and the regression runner that checks
//! fresh simulations against them.

use serde::Serialize;

use crate::attack::{sweep, PenaltyVectors};
use crate::mod10::mod10_run;
use crate::oracle::FaultyOracleConfig;
use crate::scheme::{SchemeKind, SchemeParams};

/// What a reference cell measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CellKind {
    /// Points-update attack on a windowed scheme at one accuracy pair.
    Sweep {
        scheme: SchemeKind,
        tpr: f64,
        tnr: f64,
    },
    /// PIN recovery at one symmetric accuracy.
    Mod10 { accuracy: f64 },
}

/// One stored reference value with its relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceCell {
    pub name: &'static str,
    pub kind: CellKind,
    pub expected: f64,
    pub tolerance: f64,
}

const fn sweep_cell(
    name: &'static str,
    scheme: SchemeKind,
    tpr: f64,
    tnr: f64,
    expected: f64,
) -> ReferenceCell {
    ReferenceCell {
        name,
        kind: CellKind::Sweep { scheme, tpr, tnr },
        expected,
        tolerance: 0.10,
    }
}

/// Reference mean round counts for the standard parameterizations.
///
/// The `*-classifier` cells replay accuracy pairs measured from a real
/// behavioral side channel; the rest are the simulated-oracle baselines.
pub const REFERENCE_CELLS: &[ReferenceCell] = &[
    sweep_cell("bc-perfect", SchemeKind::BehavioCog, 1.0, 1.0, 165.978),
    sweep_cell("bc-tnr0.8", SchemeKind::BehavioCog, 1.0, 0.8, 207.030),
    sweep_cell("bc-tnr0.6", SchemeKind::BehavioCog, 1.0, 0.6, 279.748),
    sweep_cell("bc-tnr0.35", SchemeKind::BehavioCog, 1.0, 0.35, 473.636),
    sweep_cell("ft-perfect", SchemeKind::FoxTail, 1.0, 1.0, 234.099),
    sweep_cell("ft-tnr0.6", SchemeKind::FoxTail, 1.0, 0.6, 390.420),
    sweep_cell("hb-perfect", SchemeKind::HopperBlum, 1.0, 1.0, 538.108),
    sweep_cell("hb-tnr0.35", SchemeKind::HopperBlum, 1.0, 0.35, 1554.770),
    sweep_cell("bc-classifier", SchemeKind::BehavioCog, 1.0, 0.38, 435.04),
    sweep_cell("ft-classifier", SchemeKind::FoxTail, 1.0, 0.40, 589.0),
    sweep_cell("hb-classifier", SchemeKind::HopperBlum, 1.0, 0.40, 1346.0),
    ReferenceCell {
        name: "mod10-acc1.0",
        kind: CellKind::Mod10 { accuracy: 1.0 },
        expected: 24.4,
        tolerance: 0.10,
    },
    ReferenceCell {
        name: "mod10-acc0.9",
        kind: CellKind::Mod10 { accuracy: 0.9 },
        expected: 36.1,
        tolerance: 0.10,
    },
    ReferenceCell {
        name: "mod10-acc0.8",
        kind: CellKind::Mod10 { accuracy: 0.8 },
        expected: 60.20,
        tolerance: 0.10,
    },
    ReferenceCell {
        name: "mod10-acc0.7",
        kind: CellKind::Mod10 { accuracy: 0.7 },
        expected: 118.37,
        tolerance: 0.10,
    },
    ReferenceCell {
        name: "mod10-acc0.6",
        kind: CellKind::Mod10 { accuracy: 0.6 },
        expected: 409.76,
        tolerance: 0.15,
    },
];

/// Result of rerunning one reference cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceOutcome {
    pub cell: ReferenceCell,
    pub measured: Option<f64>,
    /// Relative deviation from the stored value.
    pub deviation: Option<f64>,
    pub iterations: u64,
    pub pass: bool,
}

fn params_for(scheme: SchemeKind) -> SchemeParams {
    match scheme {
        SchemeKind::BehavioCog => SchemeParams::bc(),
        SchemeKind::FoxTail => SchemeParams::ft(),
        SchemeKind::HopperBlum => SchemeParams::hb(),
    }
}

/// Reruns the named reference cells (all of them when `subset` is empty)
/// and grades each against its tolerance.
///
/// Each cell's streams are namespaced by its fixed position in
/// [`REFERENCE_CELLS`], so a cell's result does not depend on which other
/// cells were selected.
pub fn reproduce(
    subset: &[String],
    iterations: u64,
    trials: u64,
    max_rounds: u64,
    base_seed: u64,
) -> Vec<ReferenceOutcome> {
    REFERENCE_CELLS
        .iter()
        .enumerate()
        .filter(|(_, cell)| subset.is_empty() || subset.iter().any(|n| n == cell.name))
        .map(|(position, cell)| {
            let seed =
                base_seed.wrapping_add((position as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let (measured, runs) = match cell.kind {
                CellKind::Sweep { scheme, tpr, tnr } => {
                    let params = params_for(scheme);
                    let penalties = PenaltyVectors::for_params(&params);
                    let cells = sweep(
                        &params,
                        &[tpr],
                        &[tnr],
                        iterations,
                        &penalties,
                        max_rounds,
                        seed,
                    )
                    .expect("reference rates are valid");
                    (cells[0].mean_rounds, iterations)
                }
                CellKind::Mod10 { accuracy } => {
                    let oracle =
                        FaultyOracleConfig::symmetric(accuracy).expect("reference accuracy");
                    let result = mod10_run(4, &oracle, trials, max_rounds.min(100_000), seed, 0);
                    (result.mean_rounds, trials)
                }
            };
            let deviation = measured.map(|m| (m - cell.expected) / cell.expected);
            let pass = deviation.is_some_and(|d| d.abs() <= cell.tolerance);
            ReferenceOutcome {
                cell: *cell,
                measured,
                deviation,
                iterations: runs,
                pass,
            }
        })
        .collect()
}
