//! The grid-based multiply-add PIN scheme and its candidate-penalization
//! attack.
//!
//! A challenge assigns a digit to each of 36 grid cells. Each secret
//! position is a tuple (location, multiplier, offset); the response digit
//! is `digit(location) * multiplier + offset mod 10`. The candidate space
//! per position is all 36 * 9 * 10 = 3240 tuples, small enough to score
//! every candidate against every observation.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::oracle::{FaultyOracleConfig, OracleAnswer};
use crate::rng::{cell_stream, StreamSeed};
use crate::stats::recovery_cdf;

pub const GRID_CELLS: usize = 36;
pub const MULTIPLIERS: u32 = 9;
pub const OFFSETS: u32 = 10;
/// 36 * 9 * 10 candidate tuples per secret position.
pub const CANDIDATES: usize = GRID_CELLS * MULTIPLIERS as usize * OFFSETS as usize;
/// Number of tuples in a full secret.
pub const SECRET_POSITIONS: usize = 4;

/// One secret position: a grid location, a multiplier in `[1, 9]` and an
/// offset in `[0, 9]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PgSecret {
    pub loc: usize,
    pub mult: u32,
    pub offset: u32,
}

impl PgSecret {
    /// Position of this tuple in the lexicographic candidate order.
    pub fn index(self) -> usize {
        self.loc * (MULTIPLIERS * OFFSETS) as usize
            + ((self.mult - 1) * OFFSETS + self.offset) as usize
    }

    pub fn from_index(index: usize) -> Self {
        debug_assert!(index < CANDIDATES);
        let per_loc = (MULTIPLIERS * OFFSETS) as usize;
        let loc = index / per_loc;
        let rest = (index % per_loc) as u32;
        Self {
            loc,
            mult: rest / OFFSETS + 1,
            offset: rest % OFFSETS,
        }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        Self {
            loc: rng.gen_range(0..GRID_CELLS),
            mult: rng.gen_range(1..=MULTIPLIERS),
            offset: rng.gen_range(0..OFFSETS),
        }
    }

    /// Draws `SECRET_POSITIONS` pairwise-distinct tuples.
    pub fn random_secret<R: Rng>(rng: &mut R) -> [PgSecret; SECRET_POSITIONS] {
        let mut out = [PgSecret {
            loc: 0,
            mult: 1,
            offset: 0,
        }; SECRET_POSITIONS];
        let mut filled = 0;
        while filled < SECRET_POSITIONS {
            let cand = PgSecret::random(rng);
            if out[..filled].iter().all(|&s| s != cand) {
                out[filled] = cand;
                filled += 1;
            }
        }
        out
    }
}

/// A digit assignment to the 36 grid cells. Six digit values appear four
/// times and the remaining four appear three times, so every value shows
/// up 3-4 times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgChallenge {
    digits: [u8; GRID_CELLS],
}

impl PgChallenge {
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        // Pick which six digit values occur four times.
        let mut values: [u8; 10] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9];
        for i in 0..6 {
            let j = rng.gen_range(i..10);
            values.swap(i, j);
        }
        let mut digits = [0u8; GRID_CELLS];
        let mut pos = 0;
        for (rank, &v) in values.iter().enumerate() {
            let copies = if rank < 6 { 4 } else { 3 };
            for _ in 0..copies {
                digits[pos] = v;
                pos += 1;
            }
        }
        debug_assert_eq!(pos, GRID_CELLS);
        for i in (1..GRID_CELLS).rev() {
            let j = rng.gen_range(0..=i);
            digits.swap(i, j);
        }
        Self { digits }
    }

    pub fn digits(&self) -> &[u8; GRID_CELLS] {
        &self.digits
    }

    pub fn digit(&self, loc: usize) -> u32 {
        u32::from(self.digits[loc])
    }
}

/// Computes one position's response and whether it required a reduction.
pub fn pg_respond(secret: PgSecret, challenge: &PgChallenge) -> (u32, bool) {
    let raw = challenge.digit(secret.loc) * secret.mult + secret.offset;
    (raw % 10, raw >= 10)
}

/// Penalty magnitudes, subtracted from candidate scores. Any pair with
/// `response_mismatch > oracle_mismatch > 0` recovers the secret.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PgPenalties {
    pub response_mismatch: i64,
    pub oracle_mismatch: i64,
}

impl Default for PgPenalties {
    fn default() -> Self {
        Self {
            response_mismatch: 10,
            oracle_mismatch: 3,
        }
    }
}

/// Scores for all 3240 candidate tuples of one secret position.
#[derive(Debug, Clone, PartialEq)]
pub struct PgBoard {
    scores: Vec<i64>,
    rounds_seen: u64,
}

impl PgBoard {
    pub fn new() -> Self {
        Self {
            scores: vec![0; CANDIDATES],
            rounds_seen: 0,
        }
    }

    pub fn scores(&self) -> &[i64] {
        &self.scores
    }

    pub fn rounds_seen(&self) -> u64 {
        self.rounds_seen
    }

    /// Whether `candidate` is ranked first (score descending, candidate
    /// order ascending on ties).
    pub fn is_top(&self, candidate: PgSecret) -> bool {
        let idx = candidate.index();
        let top = self.scores[idx];
        self.scores
            .iter()
            .enumerate()
            .all(|(c, &s)| s < top || (s == top && c >= idx))
    }
}

impl Default for PgBoard {
    fn default() -> Self {
        Self::new()
    }
}

/// Applies one observation to a candidate board: response-inconsistent
/// candidates take the large penalty, response-consistent ones whose own
/// modulus status contradicts the oracle take the small one.
pub fn pg_attack_round(
    board: &mut PgBoard,
    challenge: &PgChallenge,
    response: u32,
    answer: OracleAnswer,
    penalties: PgPenalties,
) {
    board.rounds_seen += 1;
    let says_mod = answer == OracleAnswer::Modulus;
    let mut idx = 0;
    for loc in 0..GRID_CELLS {
        let digit = challenge.digit(loc);
        for mult in 1..=MULTIPLIERS {
            let base = digit * mult;
            for offset in 0..OFFSETS {
                let raw = base + offset;
                if raw % 10 != response {
                    board.scores[idx] -= penalties.response_mismatch;
                } else if (raw >= 10) != says_mod {
                    board.scores[idx] -= penalties.oracle_mismatch;
                }
                idx += 1;
            }
        }
    }
}

/// Hard-pruning state for one position, used with a perfect oracle: any
/// candidate inconsistent with an observation is removed outright.
#[derive(Debug, Clone)]
pub struct PgElimination {
    alive: Vec<bool>,
    alive_count: usize,
}

impl PgElimination {
    pub fn new() -> Self {
        Self {
            alive: vec![true; CANDIDATES],
            alive_count: CANDIDATES,
        }
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn is_alive(&self, candidate: PgSecret) -> bool {
        self.alive[candidate.index()]
    }

    pub fn step(&mut self, challenge: &PgChallenge, response: u32, answer: OracleAnswer) {
        let says_mod = answer == OracleAnswer::Modulus;
        let mut idx = 0;
        for loc in 0..GRID_CELLS {
            let digit = challenge.digit(loc);
            for mult in 1..=MULTIPLIERS {
                let base = digit * mult;
                for offset in 0..OFFSETS {
                    if self.alive[idx] {
                        let raw = base + offset;
                        if raw % 10 != response || (raw >= 10) != says_mod {
                            self.alive[idx] = false;
                            self.alive_count -= 1;
                        }
                    }
                    idx += 1;
                }
            }
        }
    }

    pub fn recovered(&self) -> bool {
        self.alive_count == 1
    }
}

impl Default for PgElimination {
    fn default() -> Self {
        Self::new()
    }
}

/// Points update or hard elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PgMode {
    #[serde(rename = "points")]
    Points,
    #[serde(rename = "elimination")]
    Elimination,
}

/// Outcome of a batch of independent trials.
#[derive(Debug, Clone, PartialEq)]
pub struct PgRunResult {
    /// Observations needed per trial, `None` when censored at the cap.
    pub outcomes: Vec<Option<u64>>,
}

impl PgRunResult {
    /// Empirical CDF over all trials: fraction recovered within each
    /// observation count.
    pub fn cdf(&self) -> Vec<(u64, f64)> {
        recovery_cdf(&self.outcomes)
    }

    /// Median over all trials; `None` when the median trial is censored.
    pub fn median(&self) -> Option<u64> {
        let mut done: Vec<u64> = self.outcomes.iter().flatten().copied().collect();
        let mid = self.outcomes.len() / 2;
        if done.len() <= mid {
            return None;
        }
        done.sort_unstable();
        Some(done[mid])
    }
}

fn run_trial(
    oracle: &FaultyOracleConfig,
    mode: PgMode,
    penalties: PgPenalties,
    max_obs: u64,
    seed: StreamSeed,
) -> Option<u64> {
    let mut rng = seed.rng();
    let secret = PgSecret::random_secret(&mut rng);
    match mode {
        PgMode::Points => {
            let mut boards: Vec<PgBoard> = (0..SECRET_POSITIONS).map(|_| PgBoard::new()).collect();
            for obs in 1..=max_obs {
                let challenge = PgChallenge::sample(&mut rng);
                for (pos, board) in boards.iter_mut().enumerate() {
                    let (response, truth) = pg_respond(secret[pos], &challenge);
                    let answer = oracle.query(truth, &mut rng);
                    pg_attack_round(board, &challenge, response, answer, penalties);
                }
                if boards
                    .iter()
                    .enumerate()
                    .all(|(pos, b)| b.is_top(secret[pos]))
                {
                    return Some(obs);
                }
            }
            None
        }
        PgMode::Elimination => {
            let mut states: Vec<PgElimination> = (0..SECRET_POSITIONS)
                .map(|_| PgElimination::new())
                .collect();
            for obs in 1..=max_obs {
                let challenge = PgChallenge::sample(&mut rng);
                for (pos, state) in states.iter_mut().enumerate() {
                    let (response, truth) = pg_respond(secret[pos], &challenge);
                    let answer = oracle.query(truth, &mut rng);
                    state.step(&challenge, response, answer);
                }
                if states.iter().all(|s| s.recovered()) {
                    return Some(obs);
                }
            }
            None
        }
    }
}

/// Runs independent trials, each with a fresh 4-tuple secret, until every
/// position's true tuple tops its board (or the candidate set is a
/// singleton in elimination mode). All four positions keep updating each
/// observation until the whole secret is recovered.
///
/// `cell` namespaces the random streams, so runs at different accuracies
/// under one base seed stay independent.
pub fn pg_run(
    oracle: &FaultyOracleConfig,
    trials: u64,
    max_obs: u64,
    mode: PgMode,
    penalties: PgPenalties,
    base_seed: u64,
    cell: usize,
) -> PgRunResult {
    assert!(trials >= 1);
    let outcomes: Vec<Option<u64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            run_trial(
                oracle,
                mode,
                penalties,
                max_obs,
                StreamSeed::new(base_seed, cell_stream(cell, t as usize)),
            )
        })
        .collect();
    PgRunResult { outcomes }
}
