//! Counter-based randomness. Every random decision in the library is a pure
//! function of a 64-bit key and a counter, so results never depend on
//! evaluation order, thread count, or hidden generator state.
//!
//! The mixer is the SplitMix64 finalizer (Steele/Lea/Flood; Vigna's reference
//! implementation). `split(seed, i)` equals the i-th output of a SplitMix64
//! generator seeded with `seed`, which makes derived seed streams reproducible
//! against the published reference vectors.

/// Weyl increment of SplitMix64 (the golden-ratio constant).
pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

const C_A: u64 = 0xBF58_476D_1CE4_E5B9;
const C_B: u64 = 0x94D0_49BB_1331_11EB;

/// Domain tag for the edge-sampling stream of a graph.
pub const TAG_GRAPH: u64 = u64::from_le_bytes(*b"gnpedges");
/// Domain tag for the initial-configuration stream.
pub const TAG_INIT: u64 = u64::from_le_bytes(*b"initdraw");
/// Domain tag for tie resolution inside a round.
pub const TAG_TIE: u64 = u64::from_le_bytes(*b"tiebreak");

/// SplitMix64 finalizer: a fixed bijection on u64 with strong avalanche.
#[inline(always)]
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(C_A);
    x ^= x >> 27;
    x = x.wrapping_mul(C_B);
    x ^= x >> 31;
    x
}

/// i-th output of a SplitMix64 stream seeded with `seed`. Used to derive
/// per-trial seeds from the master seed and per-vertex draws from a stream
/// key; distinct counters give distinct, statistically independent values.
#[inline(always)]
pub fn split(seed: u64, i: u64) -> u64 {
    mix64(seed.wrapping_add(i.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Seed for a named sub-stream (edge sampling, initial draw, tie breaks).
/// Tags are fixed 8-byte ASCII constants, so sub-streams of one seed never
/// collide by construction of the mixing bijection.
#[inline(always)]
pub fn derive(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ tag)
}

/// Hash of a key and two counters (round, vertex). The counters enter via
/// distinct odd multipliers, so (a, b) pairs map to distinct mixer inputs
/// over any realistic counter range.
#[inline(always)]
pub fn keyed3(key: u64, a: u64, b: u64) -> u64 {
    mix64(
        key.wrapping_add(a.wrapping_mul(C_A))
            .wrapping_add(b.wrapping_mul(C_B)),
    )
}

/// Maps a uniform u64 to an index in [0, len) by the multiply-shift method.
/// Bias is at most len/2^64, far below anything observable here (len ≤ 255).
#[inline(always)]
pub fn bounded_index(r: u64, len: usize) -> usize {
    (((r as u128) * (len as u128)) >> 64) as usize
}

/// Edge-inclusion threshold for probability p: edge present iff the pair
/// hash is < threshold. p ≤ 0 and p ≥ 1 must be special-cased by the caller;
/// for 0 < p < 1 the threshold is round(p * 2^64) clamped into [1, 2^64 - 1],
/// so the realized probability differs from p by at most 2^-53 relative.
#[inline]
pub fn probability_threshold(p: f64) -> u64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let t = p * 18446744073709551616.0; // p * 2^64
    if t >= 18446744073709551615.0 {
        u64::MAX
    } else if t < 1.0 {
        1
    } else {
        t as u64
    }
}
