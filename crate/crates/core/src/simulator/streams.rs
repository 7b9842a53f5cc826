//! Keyed random streams.
//!
//! Every random quantity is drawn from a stream keyed by (master seed,
//! realization, tag, entity), so the same channel or fading value is reused
//! by every strategy evaluated on a realization, independent of evaluation
//! order and worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Tag {
    Geometry = 1,
    Fading = 2,
    Channel = 3,
    Quantization = 4,
    Resolution = 5,
    ClusterShift = 6,
    ClusterDrop = 7,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream for `entity` under `tag` in realization `index`.
pub fn stream(seed: u64, index: u64, tag: Tag, entity: u64) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    for word in [index, tag as u64, entity] {
        h = splitmix(h ^ word);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Entity key of a (BS, user) pair together with a resampling attempt.
pub fn pair_key(bs: usize, user: usize, attempt: u32) -> u64 {
    ((attempt as u64) << 56) ^ ((bs as u64) << 28) ^ user as u64
}
