//! Pinned, platform-independent randomness.
//!
//! Every random draw in this crate comes from a ChaCha8 stream
//! ([`rand_chacha::ChaCha8Rng`], keyed with `seed_from_u64`) combined with
//! the three primitives below. The primitives are spelled out so that other
//! implementations can reproduce identical instances, starting vectors and
//! permutations from the same 64-bit seed:
//!
//! - [`uniform_int`]: modulo rejection on `next_u64` (draw again while the
//!   word falls in the biased tail, then reduce);
//! - [`coin`]: the low bit of one `next_u32` draw per coin;
//! - [`permutation`]: a Fisher-Yates shuffle of `0..n` driven by
//!   [`uniform_int`], swapping positions from `n - 1` down to `1`.

use rand_core::RngCore;

/// Returns a seeded ChaCha8 stream, the generator pinned for all crate draws.
pub fn stream(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand_core::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in the inclusive range `[lo, hi]`.
///
/// Unbiased via modulo rejection: `next_u64` words at or above the largest
/// multiple of the span are discarded.
pub fn uniform_int<R: RngCore>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    assert!(lo <= hi, "empty range [{lo}, {hi}]");
    let span = hi - lo + 1;
    if span == 0 {
        // hi - lo + 1 wrapped: the range covers all of u64.
        return rng.next_u64();
    }
    let zone = u64::MAX - (u64::MAX % span);
    loop {
        let word = rng.next_u64();
        if word < zone {
            return lo + word % span;
        }
    }
}

/// Fair coin: the low bit of a single `next_u32` draw.
pub fn coin<R: RngCore>(rng: &mut R) -> u8 {
    (rng.next_u32() & 1) as u8
}

/// Uniform random permutation of `0..n` (Fisher-Yates, high index first).
pub fn permutation<R: RngCore>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = uniform_int(rng, 0, i as u64) as usize;
        perm.swap(i, j);
    }
    perm
}
