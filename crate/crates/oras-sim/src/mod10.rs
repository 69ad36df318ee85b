//! The one-time-pad PIN scheme and its reward-based digit recovery.
//!
//! Each PIN digit is masked with a fresh pad digit every round, so the
//! transcript alone is information-theoretically useless. Knowing whether
//! the mental addition carried past ten splits the digit space: on a
//! no-carry answer the secret digit is at most the response, otherwise it
//! is strictly above. Rewarding the consistent half each round singles out
//! the true digit.

use rand::Rng;
use rayon::prelude::*;

use crate::oracle::{FaultyOracleConfig, OracleAnswer};
use crate::rng::{cell_stream, StreamSeed};
use crate::stats::{mean_std, recovery_cdf};

/// One position's round: the pad digit, the masked response, and whether
/// the addition wrapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mod10Round {
    pub otp: u8,
    pub response: u8,
    pub modulus_truth: bool,
}

/// Combines a secret digit with a pad digit.
pub fn mod10_respond(secret_digit: u8, otp: u8) -> Mod10Round {
    debug_assert!(secret_digit < 10 && otp < 10);
    let sum = u32::from(secret_digit) + u32::from(otp);
    Mod10Round {
        otp,
        response: (sum % 10) as u8,
        modulus_truth: sum >= 10,
    }
}

/// Reward tally for the ten candidate digits of one PIN position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DigitBoard {
    points: [u64; 10],
    rounds_seen: u64,
}

impl DigitBoard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn points(&self) -> &[u64; 10] {
        &self.points
    }

    pub fn rounds_seen(&self) -> u64 {
        self.rounds_seen
    }

    /// Whether `digit` holds the strict unique maximum.
    pub fn unique_top(&self, digit: u8) -> bool {
        let top = self.points[digit as usize];
        self.points
            .iter()
            .enumerate()
            .all(|(d, &p)| d == digit as usize || p < top)
    }
}

/// Applies one observed round: a no-carry answer rewards digits `0..=r`,
/// a carry answer rewards digits `r+1..=9`.
pub fn mod10_round(board: &mut DigitBoard, response: u8, answer: OracleAnswer) {
    debug_assert!(response < 10);
    board.rounds_seen += 1;
    let range = match answer {
        OracleAnswer::NoModulus => 0..=usize::from(response),
        OracleAnswer::Modulus => usize::from(response) + 1..=9,
    };
    for d in range {
        board.points[d] += 1;
    }
}

/// Outcome of a batch of PIN-recovery trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Mod10Result {
    /// Rounds needed per trial, `None` when censored at the cap.
    pub rounds: Vec<Option<u64>>,
    pub mean_rounds: Option<f64>,
    pub std_rounds: Option<f64>,
    pub censored: u64,
}

impl Mod10Result {
    pub fn cdf(&self) -> Vec<(u64, f64)> {
        recovery_cdf(&self.rounds)
    }
}

fn run_trial(
    pin_length: usize,
    oracle: &FaultyOracleConfig,
    max_rounds: u64,
    seed: StreamSeed,
) -> Option<u64> {
    let mut rng = seed.rng();
    let pin: Vec<u8> = (0..pin_length).map(|_| rng.gen_range(0..10u8)).collect();
    let mut boards = vec![DigitBoard::new(); pin_length];
    for round in 1..=max_rounds {
        for (pos, board) in boards.iter_mut().enumerate() {
            let r = mod10_respond(pin[pos], rng.gen_range(0..10u8));
            let answer = oracle.query(r.modulus_truth, &mut rng);
            mod10_round(board, r.response, answer);
        }
        if boards
            .iter()
            .enumerate()
            .all(|(pos, b)| b.unique_top(pin[pos]))
        {
            return Some(round);
        }
    }
    None
}

/// Recovers uniformly random PINs over independent trials. Each round
/// draws a fresh pad digit per position; a trial ends when every
/// position's true digit is the strict unique maximum (ties keep it
/// running).
///
/// `cell` namespaces the random streams, so runs at different accuracies
/// under one base seed stay independent.
pub fn mod10_run(
    pin_length: usize,
    oracle: &FaultyOracleConfig,
    trials: u64,
    max_rounds: u64,
    base_seed: u64,
    cell: usize,
) -> Mod10Result {
    assert!(trials >= 1);
    assert!(pin_length >= 1);
    let rounds: Vec<Option<u64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            run_trial(
                pin_length,
                oracle,
                max_rounds,
                StreamSeed::new(base_seed, cell_stream(cell, t as usize)),
            )
        })
        .collect();
    let (mean_rounds, std_rounds) = mean_std(&rounds);
    let censored = rounds.iter().filter(|r| r.is_none()).count() as u64;
    Mod10Result {
        rounds,
        mean_rounds,
        std_rounds,
        censored,
    }
}
