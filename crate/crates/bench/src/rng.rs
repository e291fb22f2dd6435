//! Deterministic rng substreams.
//!
//! Every random decision in an experiment draws from a stream derived from
//! the user seed plus the coordinates of the decision (experiment id, level
//! index, rep index, purpose). Records therefore do not depend on execution
//! order, and any single rep can be reproduced in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The SplitMix64 output permutation: a well-distributed 64-bit mixer with
/// no fixed point at zero, used here to fold stream coordinates into a seed.
fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An independent deterministic stream for the given coordinates: each part
/// is folded into the state through the mixer, and the result seeds the
/// stream cipher.
pub fn substream(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    let mut state = splitmix64(seed);
    for &part in parts {
        state = splitmix64(state ^ part);
    }
    ChaCha8Rng::seed_from_u64(state)
}
