//! Seeded random streams.
//!
//! Every random quantity is drawn from ChaCha20 seeded with
//! `ChaCha20Rng::seed_from_u64(seed)`. Independent consumers of the same seed
//! use distinct ChaCha stream ids, so a Haar instance and the samples drawn
//! from its distribution never share keystream. ChaCha20 output and the
//! `seed_from_u64` expansion are platform independent, which makes every
//! seeded artifact bit-reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Stream used by [`super::haar_unitary`].
pub const HAAR_STREAM: u64 = 0;
/// Stream used by [`super::sample_outcomes`].
pub const SAMPLE_STREAM: u64 = 1;
/// Stream used by [`super::ginibre_matrix`].
pub const MATRIX_STREAM: u64 = 2;

pub fn seeded(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
