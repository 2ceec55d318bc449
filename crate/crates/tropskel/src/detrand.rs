//! Deterministic pseudo-random sampling for the reproducible test suites.
//!
//! The acceptance suites are specified over *deterministic* random instances,
//! so this is a fixed SplitMix64 rather than a crate whose stream might change
//! between versions. Not suitable for anything but test-data generation.

use crate::exact::Rat;

#[derive(Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[lo, hi]` inclusive.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    /// A small rational with numerator in `[-num_bound, num_bound]` and
    /// denominator in `[1, den_bound]`.
    pub fn small_rat(&mut self, num_bound: i64, den_bound: i64) -> Rat {
        let p = self.range_i64(-num_bound, num_bound);
        let q = self.range_i64(1, den_bound);
        Rat::from_pair(p, q)
    }

    /// A rational point of the given rank.
    pub fn point(&mut self, rank: usize, num_bound: i64, den_bound: i64) -> Vec<Rat> {
        (0..rank).map(|_| self.small_rat(num_bound, den_bound)).collect()
    }

    /// A nonzero integer vector with entries in `[-bound, bound]`.
    pub fn int_vector(&mut self, rank: usize, bound: i64) -> Vec<i64> {
        loop {
            let v: Vec<i64> = (0..rank).map(|_| self.range_i64(-bound, bound)).collect();
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_reproducible() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
