//! Seeded random number generation.
//!
//! Every stochastic routine in the crate draws from ChaCha8 (`rand_chacha`),
//! seeded through [`seeded`]. ChaCha8 is a counter-based stream cipher
//! generator whose output is specified independently of platform and word
//! size, so a given seed yields the same stream everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
