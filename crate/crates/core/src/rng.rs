//! Named, seed-derived PRNG streams. Each randomized search consumes its own
//! stream, keyed by a label, so adding a new search never shifts the draws
//! of existing ones and output stays byte-reproducible per seed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Deterministic RNG for `(seed, name)`. The label is folded with FNV-1a so
/// the derivation is stable across platforms and releases.
pub fn named_rng(seed: u64, name: &str) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    let tag = fnv1a(name.as_bytes());
    let mut state = seed ^ tag;
    for chunk in key.chunks_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_stable_and_independent() {
        let mut a1 = named_rng(7, "unitary-search");
        let mut a2 = named_rng(7, "unitary-search");
        let mut b = named_rng(7, "purity-search");
        let xs1: Vec<u64> = (0..4).map(|_| a1.random()).collect();
        let xs2: Vec<u64> = (0..4).map(|_| a2.random()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.random()).collect();
        assert_eq!(xs1, xs2);
        assert_ne!(xs1, ys);
    }
}
