//! Reproducible random streams.
//!
//! Every replication owns a ChaCha8 stream keyed by the master seed and
//! selected by a stream id derived from its position in the study
//! (cell indices, replication index, redraw attempt). Streams never share
//! state, so the schedule that evaluates replications cannot change the
//! numbers they produce.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a path of indices into a 64-bit stream id.
pub fn stream_id(path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(path.len() as u64), |h, &p| {
        splitmix64(h ^ splitmix64(p.wrapping_mul(GOLDEN)))
    })
}

/// Independent stream for `path` under the master `seed`.
pub fn stream(seed: u64, path: &[u64]) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(path));
    rng
}
