//! Order-deterministic summation.
//!
//! Values are summed sequentially in blocks of [`BLOCK`]; block sums are
//! merged in a binary tree whose shape depends only on the number of terms.
//! The result is therefore a pure function of the input sequence, no matter
//! which thread computes it.

use crate::scalar::Real;

pub const BLOCK: usize = 32;

/// Streaming pairwise accumulator.
#[derive(Debug, Clone)]
pub struct PairwiseSum<T> {
    block: T,
    block_len: usize,
    // levels[k] holds the sum of 2^k complete blocks, if any.
    levels: Vec<Option<T>>,
}

impl<T: Real> Default for PairwiseSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> PairwiseSum<T> {
    pub fn new() -> Self {
        Self {
            block: T::zero(),
            block_len: 0,
            levels: Vec::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, v: T) {
        self.block += v;
        self.block_len += 1;
        if self.block_len == BLOCK {
            let done = std::mem::replace(&mut self.block, T::zero());
            self.block_len = 0;
            self.carry(done);
        }
    }

    fn carry(&mut self, mut value: T) {
        for slot in self.levels.iter_mut() {
            match slot.take() {
                Some(prev) => value = prev + value,
                None => {
                    *slot = Some(value);
                    return;
                }
            }
        }
        self.levels.push(Some(value));
    }

    pub fn total(&self) -> T {
        let mut acc: Option<T> = None;
        for v in self.levels.iter().flatten() {
            acc = Some(match acc {
                None => *v,
                Some(a) => *v + a,
            });
        }
        match acc {
            None => self.block,
            Some(a) if self.block_len == 0 => a,
            Some(a) => a + self.block,
        }
    }
}

/// Deterministic pairwise sum of an iterator.
pub fn pairwise_sum<T: Real, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut acc = PairwiseSum::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

/// `out[k] = Σ_{j >= k} values[j]`, with `out[len] = 0`, accumulated from the
/// back with Neumaier compensation.
pub fn suffix_sums<T: Real>(values: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); values.len() + 1];
    let (mut sum, mut comp) = (T::zero(), T::zero());
    for (k, &v) in values.iter().enumerate().rev() {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
        out[k] = sum + comp;
    }
    out
}
