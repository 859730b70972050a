//! Deterministic random-stream derivation.
//!
//! Every random decision in the toolkit draws from a [`ChaCha8Rng`] substream
//! derived from the run's single master seed and a textual label. The
//! derivation is a fixed function of `(master_seed, label)`, so outputs do not
//! depend on map iteration order, thread scheduling or the order in which
//! substreams are created. Per-sentence labels (`"corrupt/<id>"` etc.) are what
//! make parallel synthesis bit-identical to the sequential path.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 64-bit FNV-1a over raw bytes. Used to fold textual labels into seeds.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut state = OFFSET;
    for b in bytes {
        state ^= u64::from(*b);
        state = state.wrapping_mul(PRIME);
    }
    state
}

/// SplitMix64 step: advances `state` and returns the next output word.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes two words into one with a SplitMix64 finalizer round.
pub fn mix64(a: u64, b: u64) -> u64 {
    let mut state = a ^ b.rotate_left(32);
    splitmix64(&mut state)
}

/// Derives a seed for a named sub-computation of `master`.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    mix64(master, fnv1a64(label.as_bytes()))
}

/// Builds the ChaCha8 substream for `(master, label)`.
///
/// The 256-bit key is expanded from the derived seed with SplitMix64, so the
/// mapping is self-contained and stable across dependency upgrades.
pub fn substream(master: u64, label: &str) -> ChaCha8Rng {
    let mut state = derive_seed(master, label);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
