//! Deterministic random-stream derivation.
//!
//! Every simulation task (one attack run, one trial, one trace) owns a
//! private ChaCha stream derived from `(base_seed, stream)`. Results are
//! therefore independent of scheduling: a task's stream is fixed by its
//! index, not by when it executes.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies one task's random stream within a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamSeed {
    pub base: u64,
    pub stream: u64,
}

impl StreamSeed {
    pub fn new(base: u64, stream: u64) -> Self {
        Self { base, stream }
    }

    /// Instantiates the stream. Same `StreamSeed` always yields the same
    /// sequence.
    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base);
        rng.set_stream(self.stream);
        rng
    }
}

/// Packs a (cell, iteration) pair into a single stream id.
///
/// Cells and iterations are each limited to 2^32, which is far beyond any
/// practical sweep size.
pub fn cell_stream(cell: usize, iteration: usize) -> u64 {
    ((cell as u64) << 32) | (iteration as u64 & 0xffff_ffff)
}
