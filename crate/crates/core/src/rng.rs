//! Deterministic, counter-based random streams.
//!
//! Per-sentence draws are keyed by `(global seed, sentence ordinal)` so that
//! corpora are reproducible regardless of how sentences are scheduled across
//! threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for one sentence. Same `(seed, ordinal)` always yields
/// the same draws.
pub fn sentence_rng(seed: u64, ordinal: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ordinal);
    rng
}

/// Stream for a whole run (training, shuffling).
pub fn run_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stable 64-bit hash used for split bucketing. FNV-1a, fixed here so that
/// splits never shift across library or std releases.
pub fn stable_hash(seed: u64, key: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in seed.to_le_bytes().iter().chain(key.as_bytes()) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
