//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 keystream keyed by the master seed and selected
//! by a 64-bit stream id, so stream `(seed, r)` never overlaps `(seed, r')`
//! and any replica can be regenerated in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream id of the high-resolution reference run in an N-sweep.
pub const REFERENCE_STREAM: u64 = u64::MAX;

/// Streams used for reference subsampling live above this offset.
pub const SUBSAMPLE_STREAM_BASE: u64 = 1 << 62;

/// Streams used by the kernel certificates live above this offset.
pub const CERTIFICATE_STREAM_BASE: u64 = 1 << 61;

/// Generator for stream `stream` under `master_seed`.
pub fn stream_rng(master_seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
