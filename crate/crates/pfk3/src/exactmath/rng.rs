//! The toolkit PRNG: SplitMix64 (Steele, Lea, Flood 2014).
//!
//! One 64-bit word of state, a fixed avalanche mix, identical output on every
//! platform.  Every randomized routine in the toolkit takes either a seed or
//! a `&mut SplitMix64`; no ambient entropy is ever consulted, so a run is a
//! pure function of `(seed, prime)`.

use crate::exactmath::fp::Fp;

/// Algorithm identifier recorded in reports.
pub const RNG_ALGORITHM: &str = "splitmix64";

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n` (n > 0) by rejection sampling.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        // Rejection zone keeps the draw unbiased.
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn fp(&mut self, p: u64) -> Fp {
        Fp::new(self.below(p), p)
    }

    /// Nonzero field element.
    pub fn fp_nonzero(&mut self, p: u64) -> Fp {
        Fp::new(1 + self.below(p - 1), p)
    }
}

/// Derives an independent stream seed from `(seed, tag, index)`.
///
/// Used to give each retry loop and each sampling purpose its own
/// deterministic stream; `tag` values are fixed per call site.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    let mut rng = SplitMix64::new(seed ^ tag.wrapping_mul(GAMMA));
    let a = rng.next_u64();
    let mut rng2 = SplitMix64::new(a.wrapping_add(index));
    rng2.next_u64()
}
