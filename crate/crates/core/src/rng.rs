//! Deterministic random streams.
//!
//! Every simulation is driven by a single 64-bit seed. Substream `i` is the
//! ChaCha8 generator seeded with that value and switched to stream `i` via
//! [`ChaCha8Rng::set_stream`], so substreams never overlap and do not depend
//! on which worker consumes them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// The root stream for `seed` (substream 0).
pub fn stream(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Substream `index` derived from `seed`.
pub fn substream(seed: u64, index: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
