//! Deterministic pseudo-random generation.
//!
//! The generator is xoshiro256++ (Blackman and Vigna, 2019), a small
//! all-purpose PRNG with 256 bits of state and excellent statistical
//! quality. State is initialized from a 64-bit seed through SplitMix64, the
//! seeding procedure recommended by the xoshiro authors, so nearby seeds
//! still yield decorrelated states.
//!
//! Every sampling entry point in this crate takes an explicit seed and owns
//! its generator, which makes results reproducible byte for byte. Batch
//! work (one stream per fit start, per synthesized realization, ...) uses
//! [`Xoshiro256PlusPlus::derive`] to obtain independent streams from a base
//! seed and a task index, so parallel scheduling order cannot change
//! results.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 step: advances `state` and returns the next output.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256++ generator. See the module docs for the seeding and stream
/// derivation scheme.
#[derive(Debug, Clone)]
pub struct Xoshiro256PlusPlus {
    s: [u64; 4],
}

impl Xoshiro256PlusPlus {
    /// Creates a generator whose state is the first four SplitMix64 outputs
    /// for `seed`.
    pub fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut s = [0u64; 4];
        for word in &mut s {
            *word = splitmix64(&mut state);
        }
        // The all-zero state is the one fixed point of the transition
        // function; SplitMix64 makes it astronomically unlikely, but a
        // guard costs nothing.
        if s == [0; 4] {
            s[0] = GOLDEN_GAMMA;
        }
        Self { s }
    }

    /// Derives the generator for task `index` under `base` seed.
    ///
    /// Both words pass through SplitMix64 before seeding, so streams for
    /// consecutive indices share no structure. Used for multi-start
    /// optimization and batched synthesis.
    pub fn derive(base: u64, index: u64) -> Self {
        let mut state = base;
        let head = splitmix64(&mut state);
        let mut mixed = head ^ index.wrapping_mul(GOLDEN_GAMMA);
        Self::new(splitmix64(&mut mixed))
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0].wrapping_add(s[3]).rotate_left(23).wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw on the open interval (0, 1).
    ///
    /// Uses the top 52 bits shifted to the midpoints of the 2^52 grid, so
    /// neither endpoint can occur; quantile transforms therefore never see
    /// 0 or 1. (With 53 bits the +0.5 midpoint offset is not exactly
    /// representable at the top of the range and the product can round to
    /// 1.0; at 52 bits it stays exact.)
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_equal_seeds() {
        let mut a = Xoshiro256PlusPlus::new(12345);
        let mut b = Xoshiro256PlusPlus::new(12345);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn reference_outputs_are_stable() {
        // Frozen from an independent implementation of SplitMix64 +
        // xoshiro256++; pins the byte-level behavior of every seeded
        // sampling path in the crate.
        let mut rng = Xoshiro256PlusPlus::new(12345);
        assert_eq!(rng.next_u64(), 0x8D94_8A82_DEF8_A568);
        assert_eq!(rng.next_u64(), 0x3477_F953_7967_02A0);
        assert_eq!(rng.next_u64(), 0x15CA_A2FC_E6DB_8D69);

        let mut zero = Xoshiro256PlusPlus::new(0);
        assert_eq!(zero.next_u64(), 0x5317_5D61_490B_23DF);
    }

    #[test]
    fn derived_streams_differ_from_each_other_and_base() {
        let mut base = Xoshiro256PlusPlus::new(7);
        let mut d0 = Xoshiro256PlusPlus::derive(7, 0);
        let mut d1 = Xoshiro256PlusPlus::derive(7, 1);
        let (b, x0, x1) = (base.next_u64(), d0.next_u64(), d1.next_u64());
        assert_ne!(x0, x1);
        assert_ne!(b, x0);
        assert_ne!(b, x1);
    }

    #[test]
    fn derive_is_stable() {
        // Frozen from the same independent implementation as above.
        let mut rng = Xoshiro256PlusPlus::derive(12345, 7);
        assert_eq!(rng.next_u64(), 0xE3AE_1F74_09AF_4872);
    }

    #[test]
    fn next_f64_stays_in_open_unit_interval() {
        let mut rng = Xoshiro256PlusPlus::new(99);
        for _ in 0..10_000 {
            let u = rng.next_f64();
            assert!(u > 0.0 && u < 1.0, "u = {u}");
        }
    }
}
