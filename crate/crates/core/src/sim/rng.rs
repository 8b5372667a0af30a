//! Seeding and random bit supply.
//!
//! Every trajectory owns a ChaCha8 stream (`rand_chacha::ChaCha8Rng`, seeded
//! through `SeedableRng::seed_from_u64`). Per-trajectory seeds come from
//! [`derive_seed`], a SplitMix64-finalizer mix of the base seed and the
//! trajectory index, so trajectories can run in any order on any thread.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trajectory `index` under `base`: `mix64(base ⊕ mix64(index))`.
#[inline]
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix64(base ^ mix64(index))
}

/// A family of independent seed sequences under one base seed. Distinct
/// `tag`s give distinct families, e.g. one per simulated process.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedStream {
    base: u64,
}

impl SeedStream {
    pub fn new(base: u64) -> Self {
        Self { base }
    }

    pub fn child(self, tag: u64) -> SeedStream {
        SeedStream {
            base: derive_seed(self.base, tag.wrapping_add(0xA5A5_0000_0000_0000)),
        }
    }

    pub fn seed(self, index: u64) -> u64 {
        derive_seed(self.base, index)
    }
}

/// Buffered supply of uniform random bits from a ChaCha8 stream. Bits are
/// consumed from the low end of each 64-bit word.
#[derive(Clone, Debug)]
pub struct BitSource {
    rng: ChaCha8Rng,
    buf: u64,
    left: u32,
}

impl BitSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            buf: 0,
            left: 0,
        }
    }

    #[inline]
    fn refill(&mut self) {
        self.buf = self.rng.next_u64();
        self.left = 64;
    }

    /// Uniform on `{0, 1, 2, 3}`.
    #[inline]
    pub fn two_bits(&mut self) -> u32 {
        if self.left < 2 {
            self.refill();
        }
        let v = (self.buf & 3) as u32;
        self.buf >>= 2;
        self.left -= 2;
        v
    }

    #[inline]
    pub fn bit(&mut self) -> bool {
        if self.left == 0 {
            self.refill();
        }
        let v = self.buf & 1 == 1;
        self.buf >>= 1;
        self.left -= 1;
        v
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_bits() {
        let mut a = BitSource::new(7);
        let mut b = BitSource::new(7);
        for _ in 0..1000 {
            assert_eq!(a.two_bits(), b.two_bits());
            assert_eq!(a.bit(), b.bit());
        }
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let s = SeedStream::new(42);
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|i| s.seed(i)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_ne!(s.child(1).seed(0), s.child(2).seed(0));
        assert_ne!(derive_seed(1, 0), derive_seed(0, 1));
    }

    #[test]
    fn two_bits_are_uniform() {
        let mut src = BitSource::new(3);
        let mut counts = [0u32; 4];
        let n = 400_000;
        for _ in 0..n {
            counts[src.two_bits() as usize] += 1;
        }
        for c in counts {
            let p = c as f64 / n as f64;
            assert!((p - 0.25).abs() < 0.005, "{counts:?}");
        }
    }
}
