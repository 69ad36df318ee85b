//! Simulation and analysis toolkit for modulus-based observation-resilient
//! authentication schemes.
//!
//! In these challenge-response schemes the user mentally sums random
//! weights of secret items and reduces the sum modulo a small constant.
//! Whether that reduction happened at all is a single bit of side-channel
//! information per round, obtainable from user behavior (response timing,
//! gaze patterns). This crate provides:
//!
//! - [`scheme`]: the three windowed k-out-of-n scheme variants, challenge
//!   generation, ground-truth modulus labeling and session-length math;
//! - [`bias`]: exact probabilities and conditional expected weights around
//!   the modulus event, in big-rational arithmetic;
//! - [`oracle`]: the faulty side-channel classifier, parameterized by its
//!   true-positive and true-negative rates;
//! - [`attack`]: the points-update secret-recovery attack, confidence
//!   traces, and deterministic accuracy-grid sweeps;
//! - [`passgrids`] and [`mod10`]: two further modulus-based schemes with
//!   tailored per-candidate attacks;
//! - [`campaign`]: config-file driven orchestration with CSV reports, a
//!   hashed run manifest, and regression against stored reference values.
//!
//! Start with the runnable examples (`cargo run --release --example
//! bias_tables`, `oracle_sweep`, `mod10_recovery`, ...); each one covers a
//! major capability end to end. The `oras-sim` binary exposes the same
//! functionality behind subcommands for scripted use.
//!
//! All randomness flows through per-task ChaCha streams derived from a
//! base seed, so every result in this crate is reproducible bit for bit
//! regardless of thread count or scheduling.

pub mod attack;
pub mod bias;
pub mod campaign;
pub mod mod10;
pub mod oracle;
pub mod passgrids;
pub mod rng;
pub mod scheme;
pub mod stats;

pub use attack::{
    attack_round, run_attack, run_rounds, run_trace, sweep, AttackOutcome, ConfidenceTrace,
    ObservedRound, PenaltyVectors, ScoreBoard, SweepCell,
};
pub use bias::{
    conditional_expected_weight, prob_g, prob_mod_event, prob_sum, response_bias_table, BiasTable,
    SumDistribution, WeightEvent,
};
pub use campaign::{run_campaign, CampaignConfig, RunReport, Task};
pub use oracle::{FaultyOracleConfig, OracleAnswer};
pub use rng::StreamSeed;
pub use scheme::{
    respond, rounds_per_session, sample_challenge, Challenge, RoundRecord, RoundSampler,
    SchemeKind, SchemeParams, Secret,
};
