//! Seed derivation and the fixed pseudo-random generator used everywhere.
//!
//! Every random decision in the toolkit is drawn from [`SampleRng`], a
//! xoshiro256** generator. The algorithms are written out here (rather than
//! taken from `rand`) so that another implementation can reproduce every
//! sample bit for bit:
//!
//! * `mix64(z)`: `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9`;
//!   `z = (z ^ (z >> 27)) * 0x94D049BB133111EB`; `z ^ (z >> 31)` (wrapping).
//! * SplitMix64 output `k` (k >= 1) for seed `s` is `mix64(s + k * GOLDEN_GAMMA)`.
//! * `derive_seed(master, index)` is SplitMix64 output `index + 1` for seed `master`.
//! * `stream_seed(seed, tag) = mix64(seed ^ mix64(tag))`.
//! * xoshiro256** state is the first four SplitMix64 outputs of the stream seed.
//!
//! Derived samplers:
//!
//! * `next_f64`: `(next_u64 >> 11) * 2^-53`, uniform on `[0, 1)`.
//! * `below(n)`: Lemire's multiply-and-reject on the 128-bit product.
//! * `standard_normal`: Box-Muller cosine branch,
//!   `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`; two uniforms per sample, no caching.
//! * `poisson`: sequential CDF inversion with one uniform per sample.

use core::f64::consts::PI;

/// Odd constant that drives the SplitMix64 counter.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer. A bijection on `u64`.
#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample seed. Distinct indices always give distinct seeds for the same
/// master seed, because `index -> master + (index + 1) * GOLDEN_GAMMA` is
/// injective and `mix64` is a bijection.
#[inline]
pub const fn derive_seed(master_seed: u64, sample_index: u64) -> u64 {
    mix64(master_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(sample_index.wrapping_add(1))))
}

/// Independent purposes that draw from a sample's derived seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Table spec draws; the attempt number separates layout-rejection retries.
    Spec { attempt: u32 },
    Augmentation,
    Content,
    Layout,
    Noise,
    Split,
    Latex,
}

impl Stream {
    pub const fn tag(self) -> u64 {
        match self {
            Stream::Spec { attempt } => 0x5350_4543_0000_0000 | attempt as u64,
            Stream::Augmentation => 0x4155_474D,
            Stream::Content => 0x434F_4E54,
            Stream::Layout => 0x4C41_594F,
            Stream::Noise => 0x4E4F_4953,
            Stream::Split => 0x5350_4C54,
            Stream::Latex => 0x4C41_5458,
        }
    }
}

#[inline]
pub const fn stream_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag))
}

/// xoshiro256** with SplitMix64 seeding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRng {
    s: [u64; 4],
}

impl SampleRng {
    pub fn from_seed(seed: u64) -> Self {
        let mut s = [0u64; 4];
        for (k, slot) in s.iter_mut().enumerate() {
            *slot = mix64(seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(k as u64 + 1)));
        }
        SampleRng { s }
    }

    pub fn for_stream(seed: u64, stream: Stream) -> Self {
        Self::from_seed(stream_seed(seed, stream.tag()))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`. `n` must be nonzero.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no valid outcome");
        let mut m = u128::from(self.next_u64()) * u128::from(n);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = u128::from(self.next_u64()) * u128::from(n);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: u32, hi: u32) -> u32 {
        debug_assert!(lo <= hi);
        lo + self.below(u64::from(hi - lo) + 1) as u32
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    /// Uniform real in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// `true` with probability `p`; `p = 0` never fires and `p = 1` always does.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
    }

    pub fn poisson(&mut self, sampler: &Poisson) -> u32 {
        if sampler.lambda <= 0.0 {
            return 0;
        }
        let u = self.next_f64();
        let mut k = 0u32;
        let mut p = sampler.p0;
        let mut cdf = p;
        while u >= cdf && k < Poisson::MAX_K {
            k += 1;
            p *= sampler.lambda / f64::from(k);
            cdf += p;
        }
        k
    }

    /// Fisher-Yates, walking from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Precomputed Poisson parameters so the per-pixel draw avoids an `exp`.
#[derive(Debug, Clone, Copy)]
pub struct Poisson {
    lambda: f64,
    p0: f64,
}

impl Poisson {
    /// Largest rate accepted; beyond this `exp(-lambda)` loses too much precision.
    pub const MAX_LAMBDA: f64 = 100.0;
    const MAX_K: u32 = 10_000;

    pub fn new(lambda: f64) -> Option<Self> {
        if !(0.0..=Self::MAX_LAMBDA).contains(&lambda) {
            return None;
        }
        Some(Poisson { lambda, p0: libm::exp(-lambda) })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_vector() {
        // First outputs of SplitMix64 seeded with 0 (reference implementation).
        assert_eq!(derive_seed(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(derive_seed(0, 1), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn xoshiro_reference_vector() {
        // Reference xoshiro256** with state {1, 2, 3, 4}.
        let mut rng = SampleRng { s: [1, 2, 3, 4] };
        let out: [u64; 3] = [rng.next_u64(), rng.next_u64(), rng.next_u64()];
        assert_eq!(out, [11520, 0, 1509978240]);
    }

    #[test]
    fn derived_seeds_differ_per_index() {
        let seeds: alloc::vec::Vec<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SampleRng::from_seed(3);
        for n in [1u64, 2, 3, 7, 1000, u64::MAX] {
            for _ in 0..200 {
                assert!(rng.below(n) < n);
            }
        }
    }

    #[test]
    fn bernoulli_edges() {
        let mut rng = SampleRng::from_seed(11);
        assert!((0..1000).all(|_| !rng.bernoulli(0.0)));
        assert!((0..1000).all(|_| rng.bernoulli(1.0)));
    }

    #[test]
    fn poisson_zero_rate_is_zero() {
        let mut rng = SampleRng::from_seed(1);
        let p = Poisson::new(0.0).unwrap();
        assert!((0..100).all(|_| rng.poisson(&p) == 0));
        assert!(Poisson::new(-0.5).is_none());
    }

    #[test]
    fn poisson_mean_matches_rate() {
        let mut rng = SampleRng::from_seed(5);
        let p = Poisson::new(3.0).unwrap();
        let n = 100_000;
        let total: u64 = (0..n).map(|_| u64::from(rng.poisson(&p))).sum();
        let mean = total as f64 / n as f64;
        // sd of the mean is sqrt(3 / 1e5) ~ 0.0055
        assert!((mean - 3.0).abs() < 0.03, "{mean}");
    }

    #[test]
    fn shuffle_is_permutation() {
        let mut rng = SampleRng::from_seed(9);
        let mut v: alloc::vec::Vec<u32> = (0..50).collect();
        rng.shuffle(&mut v);
        let mut s = v.clone();
        s.sort_unstable();
        assert_eq!(s, (0..50).collect::<alloc::vec::Vec<_>>());
        assert_ne!(v, s);
    }
}
