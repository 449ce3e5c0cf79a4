//! Deterministic random source for the simulation engine.
//!
//! The generator is xoshiro256++ 1.0 (Blackman & Vigna, 2019), seeded from a
//! single 64-bit value through SplitMix64 as the reference implementation
//! recommends. Batches of trials derive their own generators through
//! [`batch_seed`], a stateless counter scheme, so a run's output is a pure
//! function of `(seed, batch layout)` and never of thread scheduling.

/// SplitMix64 (Vigna, 2015): a 64-bit state stepped by the golden-ratio
/// increment and finalised by two xor-multiply rounds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix(self.state)
    }
}

/// The SplitMix64 finaliser; a bijective 64-bit mixer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256++ 1.0: 256 bits of state, 64-bit output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xoshiro256PlusPlus {
    s: [u64; 4],
}

impl Xoshiro256PlusPlus {
    /// Expands a 64-bit seed into the full state via SplitMix64.
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        Self {
            s: [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }
}

/// Sub-seed for batch `batch_index` of a run rooted at `root_seed`:
/// `mix(root ⊕ batch·φ)` where φ is the 64-bit golden-ratio constant.
///
/// For a fixed root the map is injective in the batch index, so distinct
/// batches never share a generator, and the scheme involves no shared state.
pub fn batch_seed(root_seed: u64, batch_index: u64) -> u64 {
    mix(root_seed ^ batch_index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Xoshiro256PlusPlus::seed_from_u64(42);
        let mut b = Xoshiro256PlusPlus::seed_from_u64(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = Xoshiro256PlusPlus::seed_from_u64(1);
        let mut b = Xoshiro256PlusPlus::seed_from_u64(2);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    /// Pins the stream for seed 0 so accidental changes to the generator
    /// or the seeding path are caught; reproducibility is part of the
    /// engine's contract.
    #[test]
    fn seed_zero_stream_is_pinned() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(0);
        let first: Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
        assert_eq!(
            first,
            vec![
                5987356902031041503,
                7051070477665621255,
                6633766593972829180,
                211316841551650330
            ]
        );
    }

    #[test]
    fn batch_seeds_are_distinct_for_a_fixed_root() {
        let seeds: Vec<u64> = (0..1000).map(|b| batch_seed(7, b)).collect();
        let mut dedup = seeds.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), seeds.len());
    }

    #[test]
    fn output_looks_uniform_in_the_mean() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(123);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| rng.next_u64() as f64 / u64::MAX as f64)
            .sum::<f64>()
            / n as f64;
        // 3 sigma band around 1/2 for a mean of n uniforms
        let tolerance = 3.0 * (1.0f64 / 12.0 / n as f64).sqrt();
        assert!((mean - 0.5).abs() < tolerance, "mean {mean} off");
    }
}
