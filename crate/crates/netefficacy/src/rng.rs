//! Counter-based RNG for the contact simulator.
//!
//! Every draw is a pure function of `(seed, stream, counter)`, so trials
//! can run on any number of workers in any order and still reproduce the
//! exact sequential result. Output is stable across platforms. Not
//! cryptographically secure.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// 64-bit avalanche finalizer (Stafford mix13, as in SplitMix64).
#[inline(always)]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A randomly-accessible stream of 64-bit values keyed by `(seed, stream)`.
///
/// Value `i` of the stream is `mix64(base + (i + 1) * gamma)` where the
/// base itself is a hash of the key, i.e. SplitMix64 indexed by counter
/// instead of advanced by mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    base: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let base = mix64(mix64(seed ^ GOLDEN_GAMMA).wrapping_add(stream.wrapping_mul(GOLDEN_GAMMA)));
        Self { base }
    }

    /// The `index`-th value of this stream.
    #[inline(always)]
    pub fn value(&self, index: u64) -> u64 {
        mix64(
            self.base
                .wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// The `index`-th value reduced to `[0, bound)`. The modulo bias is
    /// below 2^-40 for every bound used by the simulator (< 2^24).
    #[inline(always)]
    pub fn index_below(&self, index: u64, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.value(index) % bound
    }
}
