//! Deterministic compensated summation.
//!
//! Every reduction in this crate goes through the routines here so that
//! results are a pure function of the value sequence: fixed block size,
//! fixed association order, Neumaier compensation inside blocks. Splitting
//! work across threads never changes the answer because callers first
//! materialize per-row (or per-block) partial sums in index order and then
//! combine them sequentially with [`pairwise_sum`].

/// Block size at which [`pairwise_sum`] switches to a sequential
/// compensated loop. Fixed so the association order never depends on
/// input length in a way that reorders previously summed prefixes.
const PAIRWISE_BLOCK: usize = 64;

/// Streaming Neumaier (improved Kahan) accumulator.
///
/// Tracks a running sum and a compensation term; the final value is
/// `sum + compensation`. Error is `O(eps)` relative to the sum of
/// absolute values, independent of length for practical purposes.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice in index order.
pub fn neumaier_sum(values: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// Fixed-block pairwise summation.
///
/// Blocks of [`PAIRWISE_BLOCK`] values are summed sequentially with
/// compensation, then combined by recursive halving. The association
/// order is a function of the slice alone, so the result is bit-stable
/// across runs and thread counts as long as callers present values in a
/// deterministic order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return neumaier_sum(values);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn matches_exact_sum_on_ill_conditioned_input() {
        // 1 + 1e100 + 1 - 1e100 cancels exactly under Neumaier.
        let vals = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(&vals), 2.0);
        assert_eq!(pairwise_sum(&vals), 2.0);
    }

    #[test]
    fn pairwise_is_deterministic_and_accurate() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let vals: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>() - 0.5).collect();
        let a = pairwise_sum(&vals);
        let b = pairwise_sum(&vals);
        assert_eq!(a, b);
        // Reference via f128-ish accumulation in two pieces.
        let exact: f64 = {
            let mut acc = NeumaierSum::new();
            for &v in &vals {
                acc.add(v);
            }
            acc.value()
        };
        assert!((a - exact).abs() <= 1e-12 * vals.len() as f64 * f64::EPSILON.max(1e-30) + 1e-12);
    }

    #[test]
    fn block_structure_independent_of_split_point() {
        let vals: Vec<f64> = (0..1_000).map(|i| (i as f64).sin()).collect();
        // Summing rows then combining equals summing the concatenation only
        // if the caller uses the same order; this checks the basic identity
        // the energy code relies on: per-row sums combined with pairwise_sum
        // are reproducible.
        let rows: Vec<f64> = vals.chunks(100).map(neumaier_sum).collect();
        let a = pairwise_sum(&rows);
        let b = pairwise_sum(&rows);
        assert_eq!(a, b);
    }
}
