//! Exact categorical sampling from a 64-bit uniform draw.
//!
//! A draw `r` is read as the rational `r / 2^64` and compared against the
//! exact cumulative probabilities. Category `i` is selected iff
//! `cum_{i-1} ≤ r/2^64 < cum_i`, which is equivalent to the integer
//! comparison `r < ⌈cum_i · 2^64⌉`; the thresholds are computed once with
//! arbitrary-precision ceiling division, so no floating point enters the
//! sampler and probabilities like 1/3 carry no representation bias beyond
//! the 2^-64 granularity of the draw itself.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct CategoricalSampler {
    /// `thresholds[i] = ⌈cum_i · 2^64⌉`; the last entry is exactly 2^64.
    thresholds: Vec<u128>,
}

impl CategoricalSampler {
    /// Builds a sampler over probabilities that sum to exactly 1.
    pub fn new(probs: &[Rational]) -> Self {
        let two_64 = BigInt::one() << 64u32;
        let mut cum = Rational::zero();
        let thresholds = probs
            .iter()
            .map(|p| {
                cum = &cum + p;
                let num = cum.numer() * &two_64;
                let den = cum.denom();
                // ceil(num/den) for non-negative num
                let t = (&num + (den - BigInt::one())) / den;
                t.to_u128().expect("cumulative probability exceeds 1")
            })
            .collect::<Vec<_>>();
        debug_assert_eq!(
            thresholds.last().copied(),
            Some(1u128 << 64),
            "probabilities must sum to 1"
        );
        Self { thresholds }
    }

    /// Maps a uniform 64-bit draw to a category index.
    pub fn sample(&self, draw: u64) -> usize {
        self.thresholds.partition_point(|&t| t <= draw as u128)
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }
}
