//! Points-update secret recovery against the windowed schemes.
//!
//! The attacker watches challenge-response rounds and asks the oracle
//! whether each round involved a modular reduction. On a no-modulus answer
//! every challenge item whose weight could not have contributed to the
//! response is penalized; on a modulus answer a second penalty vector
//! applies (all zeros by default, which simulations show converges
//! fastest). Decoy items accumulate penalties faster than secret items, so
//! the secret eventually occupies the top of the score ranking.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::oracle::{FaultyOracleConfig, OracleAnswer, OracleError};
use crate::rng::{cell_stream, StreamSeed};
use crate::scheme::{respond, Challenge, RoundSampler, SchemeKind, SchemeParams, Secret};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PenaltyError {
    #[error("penalty vectors must have length d={expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("no-modulus penalties must be nonpositive and nonincreasing")]
    BadNoModVector,
    #[error("modulus penalties must be nondecreasing")]
    BadModVector,
}

/// Per-weight score updates: `u` applies on a no-modulus answer to items
/// whose weight exceeds the feasible maximum, `v` applies on a modulus
/// answer to every challenge item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PenaltyVectors {
    u: Vec<i64>,
    v: Vec<i64>,
}

impl PenaltyVectors {
    pub fn new(u: Vec<i64>, v: Vec<i64>) -> Result<Self, PenaltyError> {
        if u.len() != v.len() {
            return Err(PenaltyError::WrongLength {
                expected: u.len(),
                got: v.len(),
            });
        }
        if u.iter().any(|&x| x > 0) || u.windows(2).any(|w| w[0] < w[1]) {
            return Err(PenaltyError::BadNoModVector);
        }
        if v.windows(2).any(|w| w[0] > w[1]) {
            return Err(PenaltyError::BadModVector);
        }
        Ok(Self { u, v })
    }

    /// The reference choice: `u = (-1, ..., -1)`, `v = (0, ..., 0)`.
    ///
    /// The leading `u` entry is unreachable (the update requires a weight
    /// strictly above a nonnegative response), so this is behaviorally
    /// identical to a vector with `u[0] = 0`.
    pub fn standard(d: u32) -> Self {
        Self {
            u: vec![-1; d as usize],
            v: vec![0; d as usize],
        }
    }

    pub fn for_params(params: &SchemeParams) -> Self {
        Self::standard(params.d())
    }

    pub fn u(&self) -> &[i64] {
        &self.u
    }

    pub fn v(&self) -> &[i64] {
        &self.v
    }

    pub fn matches_modulus(&self, d: u32) -> bool {
        self.u.len() == d as usize
    }
}

/// Accumulated per-item scores for an attack in progress.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreBoard {
    points: Vec<i64>,
    rounds_seen: u64,
}

impl ScoreBoard {
    pub fn new(n: usize) -> Self {
        Self {
            points: vec![0; n],
            rounds_seen: 0,
        }
    }

    pub fn points(&self) -> &[i64] {
        &self.points
    }

    pub fn rounds_seen(&self) -> u64 {
        self.rounds_seen
    }

    /// Items ordered best-first: points descending, index ascending on ties.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        self.sort_ranking(&mut order);
        order
    }

    fn sort_ranking(&self, order: &mut [usize]) {
        order
            .sort_unstable_by(|&a, &b| self.points[b].cmp(&self.points[a]).then_with(|| a.cmp(&b)));
    }
}

/// The attacker's view of one round: the public challenge and the
/// submitted response, nothing else.
#[derive(Debug, Clone, Copy)]
pub struct ObservedRound<'a> {
    pub challenge: &'a Challenge,
    pub response: u32,
}

/// Largest raw sum consistent with the observed response in a no-modulus
/// round. Weights above it could not have occurred on a secret item.
fn penalty_threshold(kind: SchemeKind, d: u32, response: u32) -> u32 {
    match kind {
        SchemeKind::BehavioCog | SchemeKind::HopperBlum => response,
        SchemeKind::FoxTail => {
            if response == 0 {
                d / 2 - 1
            } else {
                d - 1
            }
        }
    }
}

/// Applies one observed round to the score board.
///
/// On a no-modulus answer, every challenge item whose weight exceeds the
/// response-feasible maximum receives its `u` penalty; on a modulus answer
/// every challenge item receives its `v` penalty. Items outside the
/// challenge are untouched.
pub fn attack_round(
    board: &mut ScoreBoard,
    kind: SchemeKind,
    observed: ObservedRound<'_>,
    answer: OracleAnswer,
    penalties: &PenaltyVectors,
) {
    board.rounds_seen += 1;
    match answer {
        OracleAnswer::NoModulus => {
            let threshold = penalty_threshold(kind, penalties.u.len() as u32, observed.response);
            for &(item, weight) in observed.challenge.entries() {
                if weight > threshold {
                    board.points[item] += penalties.u[weight as usize];
                }
            }
        }
        OracleAnswer::Modulus => {
            for &(item, weight) in observed.challenge.entries() {
                board.points[item] += penalties.v[weight as usize];
            }
        }
    }
}

/// Result of one attack run.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutcome {
    /// Non-empty rounds observed until the top-`k` ranking equaled the
    /// secret, or `None` when the cap was reached first.
    pub rounds_to_success: Option<u64>,
    /// Final item ranking, best first.
    pub ranking: Vec<usize>,
}

/// Point gaps around the ranking boundary, one row per counted round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRow {
    pub round: u64,
    /// Gap between ranks k-1 and k.
    pub diff_km1_k: u64,
    /// Gap between ranks k and k+1 (the secret/decoy boundary).
    pub diff_k_kp1: u64,
    /// Gap between ranks k+1 and k+2.
    pub diff_kp1_kp2: u64,
}

/// Per-round history of the three boundary gaps. Once the boundary gap
/// pulls away from its neighbors the attacker can be confident the top-`k`
/// items are the secret.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfidenceTrace {
    pub rows: Vec<TraceRow>,
}

struct AttackEngine<'a, R: Rng> {
    params: &'a SchemeParams,
    secret: &'a Secret,
    secret_mask: Vec<bool>,
    oracle: &'a FaultyOracleConfig,
    penalties: &'a PenaltyVectors,
    sampler: RoundSampler,
    board: ScoreBoard,
    order: Vec<usize>,
    rng: &'a mut R,
}

impl<'a, R: Rng> AttackEngine<'a, R> {
    fn new(
        params: &'a SchemeParams,
        secret: &'a Secret,
        oracle: &'a FaultyOracleConfig,
        penalties: &'a PenaltyVectors,
        rng: &'a mut R,
    ) -> Self {
        assert!(
            penalties.matches_modulus(params.d()),
            "penalty vectors sized for d={} but scheme has d={}",
            penalties.u.len(),
            params.d()
        );
        Self {
            params,
            secret,
            secret_mask: secret.mask(params.n()),
            oracle,
            penalties,
            sampler: RoundSampler::new(params),
            board: ScoreBoard::new(params.n()),
            order: (0..params.n()).collect(),
            rng,
        }
    }

    /// Plays one round; returns whether it counts (contained a secret item).
    fn step(&mut self) -> bool {
        let challenge = self.sampler.sample(self.params, self.rng);
        let record = respond(self.params, self.secret, &challenge, self.rng);
        let answer = self.oracle.query(record.modulus_truth, self.rng);
        attack_round(
            &mut self.board,
            self.params.kind(),
            ObservedRound {
                challenge: &record.challenge,
                response: record.response,
            },
            answer,
            self.penalties,
        );
        record.g >= 1
    }

    fn rank(&mut self) {
        let board = &self.board;
        self.order.sort_unstable_by(|&a, &b| {
            board.points[b]
                .cmp(&board.points[a])
                .then_with(|| a.cmp(&b))
        });
    }

    fn top_k_is_secret(&self) -> bool {
        self.order[..self.params.k()]
            .iter()
            .all(|&item| self.secret_mask[item])
    }

    fn trace_row(&self, round: u64) -> TraceRow {
        let k = self.params.k();
        let gap = |hi: usize, lo: usize| -> u64 {
            (self.board.points[self.order[hi]] - self.board.points[self.order[lo]]).unsigned_abs()
        };
        if k < 2 || self.params.n() < k + 2 {
            return TraceRow {
                round,
                diff_km1_k: 0,
                diff_k_kp1: 0,
                diff_kp1_kp2: 0,
            };
        }
        TraceRow {
            round,
            diff_km1_k: gap(k - 2, k - 1),
            diff_k_kp1: gap(k - 1, k),
            diff_kp1_kp2: gap(k, k + 1),
        }
    }
}

/// Runs the attack until the top-`k` items equal the secret set or
/// `max_rounds` counted (non-empty) rounds pass, whichever is first.
///
/// Empty rounds still update the board and are still replayed from the
/// stream; they just do not advance the round count, matching how rounds
/// are tallied in the reference results. Censoring is an outcome, not an
/// error.
pub fn run_attack<R: Rng>(
    params: &SchemeParams,
    secret: &Secret,
    oracle: &FaultyOracleConfig,
    penalties: &PenaltyVectors,
    max_rounds: u64,
    rng: &mut R,
) -> (AttackOutcome, ConfidenceTrace) {
    run_attack_inner(params, secret, oracle, penalties, max_rounds, rng, true)
}

fn run_attack_inner<R: Rng>(
    params: &SchemeParams,
    secret: &Secret,
    oracle: &FaultyOracleConfig,
    penalties: &PenaltyVectors,
    max_rounds: u64,
    rng: &mut R,
    record_trace: bool,
) -> (AttackOutcome, ConfidenceTrace) {
    let mut engine = AttackEngine::new(params, secret, oracle, penalties, rng);
    let mut trace = ConfidenceTrace::default();
    let mut counted = 0u64;
    while counted < max_rounds {
        let counts = engine.step();
        if counts {
            counted += 1;
        }
        engine.rank();
        if counts && record_trace {
            trace.rows.push(engine.trace_row(counted));
        }
        if engine.top_k_is_secret() {
            let outcome = AttackOutcome {
                rounds_to_success: Some(counted.max(1)),
                ranking: engine.order.clone(),
            };
            return (outcome, trace);
        }
    }
    let outcome = AttackOutcome {
        rounds_to_success: None,
        ranking: engine.order.clone(),
    };
    (outcome, trace)
}

/// Runs for exactly `counted_rounds` non-empty rounds with no early stop,
/// recording the boundary gaps the whole way.
pub fn run_trace<R: Rng>(
    params: &SchemeParams,
    secret: &Secret,
    oracle: &FaultyOracleConfig,
    penalties: &PenaltyVectors,
    counted_rounds: u64,
    rng: &mut R,
) -> ConfidenceTrace {
    let mut engine = AttackEngine::new(params, secret, oracle, penalties, rng);
    let mut trace = ConfidenceTrace::default();
    let mut counted = 0u64;
    while counted < counted_rounds {
        if engine.step() {
            counted += 1;
            engine.rank();
            trace.rows.push(engine.trace_row(counted));
        }
    }
    trace
}

/// Plays a fixed number of observed rounds (empty ones included) and
/// returns the raw board.
pub fn run_rounds<R: Rng>(
    params: &SchemeParams,
    secret: &Secret,
    oracle: &FaultyOracleConfig,
    penalties: &PenaltyVectors,
    observed_rounds: u64,
    rng: &mut R,
) -> ScoreBoard {
    let mut engine = AttackEngine::new(params, secret, oracle, penalties, rng);
    for _ in 0..observed_rounds {
        engine.step();
    }
    engine.board
}

/// Aggregate statistics for one oracle accuracy cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub scheme: SchemeKind,
    pub tpr: f64,
    pub tnr: f64,
    pub iterations: u64,
    /// Mean rounds over the runs that recovered the secret, if any did.
    pub mean_rounds: Option<f64>,
    /// Sample standard deviation over the same runs.
    pub std_rounds: Option<f64>,
    pub censored: u64,
}

impl SweepCell {
    fn from_rounds(scheme: SchemeKind, tpr: f64, tnr: f64, rounds: &[Option<u64>]) -> Self {
        let finished: Vec<f64> = rounds.iter().flatten().map(|&r| r as f64).collect();
        let censored = (rounds.len() - finished.len()) as u64;
        let (mean, std) = if finished.is_empty() {
            (None, None)
        } else {
            let mean = finished.iter().sum::<f64>() / finished.len() as f64;
            let std = if finished.len() < 2 {
                0.0
            } else {
                let var = finished.iter().map(|r| (r - mean).powi(2)).sum::<f64>()
                    / (finished.len() - 1) as f64;
                var.sqrt()
            };
            (Some(mean), Some(std))
        };
        SweepCell {
            scheme,
            tpr,
            tnr,
            iterations: rounds.len() as u64,
            mean_rounds: mean,
            std_rounds: std,
            censored,
        }
    }
}

/// Runs `iterations` independent attacks (fresh secret each) for every
/// `(tpr, tnr)` grid cell.
///
/// Every (cell, iteration) task draws its randomness from a stream fixed
/// by its indices, so the result is a pure function of the inputs no
/// matter how the work is scheduled.
pub fn sweep(
    params: &SchemeParams,
    tpr_grid: &[f64],
    tnr_grid: &[f64],
    iterations: u64,
    penalties: &PenaltyVectors,
    max_rounds: u64,
    base_seed: u64,
) -> Result<Vec<SweepCell>, OracleError> {
    assert!(
        !tpr_grid.is_empty() && !tnr_grid.is_empty(),
        "grids must be nonempty"
    );
    assert!(iterations >= 1, "need at least one iteration");
    let mut cells = Vec::with_capacity(tpr_grid.len() * tnr_grid.len());
    for &tpr in tpr_grid {
        for &tnr in tnr_grid {
            cells.push(FaultyOracleConfig::new(tpr, tnr)?);
        }
    }
    Ok(cells
        .iter()
        .enumerate()
        .map(|(ci, oracle)| {
            let rounds: Vec<Option<u64>> = (0..iterations)
                .into_par_iter()
                .map(|it| {
                    let mut rng = StreamSeed::new(base_seed, cell_stream(ci, it as usize)).rng();
                    let secret = Secret::random(params, &mut rng);
                    run_attack_inner(
                        params, &secret, oracle, penalties, max_rounds, &mut rng, false,
                    )
                    .0
                    .rounds_to_success
                })
                .collect();
            SweepCell::from_rounds(params.kind(), oracle.tpr(), oracle.tnr(), &rounds)
        })
        .collect())
}
