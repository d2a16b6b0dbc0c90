//! Pair-correlation statistics on the circle, the step-function
//! approximation of the Gaussian, and diagonal-term accounting.
//!
//! The (weak) pair-correlation statistic at exponent `alpha` is
//!
//! ```text
//! F(s) = (1/N^{2-alpha}) #{1 <= m != n <= N: |x_m - x_n| <= s/N^alpha},
//! ```
//!
//! with circular distance. `alpha = 1` is the Poissonian scaling, where
//! i.i.d. uniform points give `F(s) -> 2s`. Counting is exact: a sorted
//! two-pointer sweep whose comparisons are bit-identical to the brute-force
//! predicate `circ_dist(x_m, x_n) <= s/N^alpha`, so counts agree with the
//! O(N^2) enumeration integer-for-integer.
//!
//! `step_approx_gaussian` builds the slab decomposition
//! `e^{-y^2} ~ sum_k a_k chi_{|y| <= b_k}` with certified sup error, used by
//! `energy_from_counts` to reconstruct a Gaussian pair energy from counts
//! alone.

use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::sum::NeumaierSum;

/// Smallest accepted slab height; below this the level list would need
/// more than a million entries.
pub const STEP_MIN_EPS: f64 = 1e-6;

/// A pair-correlation curve over a grid of scales.
#[derive(Clone, Debug)]
pub struct PairCorrCurve {
    pub alpha: f64,
    pub s_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub include_diagonal: bool,
}

/// Step-function approximation of `e^{-y^2}`: the sum of slabs
/// `a_k chi_{|y| <= b_k}` with `b_k` strictly increasing.
#[derive(Clone, Debug)]
pub struct StepApprox {
    /// Pairs `(a_k, b_k)`, sorted by ascending `b_k`; all `b_k > 0`.
    pub levels: Vec<(f64, f64)>,
    pub eps: f64,
}

impl StepApprox {
    /// Value of the step function at `y`.
    pub fn eval(&self, y: f64) -> f64 {
        let a = y.abs();
        let mut s = 0.0;
        for &(h, b) in &self.levels {
            if a <= b {
                s += h;
            }
        }
        s
    }

    /// Exact sup-norm distance to `e^{-y^2}` over the whole line. Between
    /// breakpoints the Gaussian is monotone and the step constant, so the
    /// supremum is attained in the closure of the breakpoint set; this
    /// evaluates every one-sided candidate.
    pub fn sup_error(&self) -> f64 {
        let total: f64 = self.levels.iter().map(|(a, _)| a).sum();
        let mut worst = (1.0 - total).abs();
        let mut left_value = total;
        for &(a, b) in &self.levels {
            let f = (-b * b).exp();
            worst = worst.max((f - left_value).abs());
            left_value -= a;
            worst = worst.max((f - left_value).abs());
        }
        worst
    }

    /// Largest deviation from `e^{-y^2}` over an even grid reaching past
    /// the outermost breakpoint; a lower bound on `sup_error`.
    pub fn sup_error_on_grid(&self, samples: usize) -> f64 {
        let b_max = self.levels.last().map_or(0.0, |&(_, b)| b);
        let hi = b_max + 4.0;
        let mut worst: f64 = 0.0;
        for i in 0..=samples {
            let y = hi * i as f64 / samples as f64;
            worst = worst.max(((-y * y).exp() - self.eval(y)).abs());
        }
        worst
    }

    /// Integral of the step function over the line: `sum_k 2 a_k b_k`;
    /// approaches `sqrt(pi)` as the slabs refine.
    pub fn integral(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for &(a, b) in &self.levels {
            acc.add(2.0 * a * b);
        }
        acc.value()
    }
}

/// Unordered pairs of sorted values at circular distance <= rho, counted
/// with comparisons bit-identical to the brute-force `circ_dist` predicate.
pub(crate) fn count_within(sorted: &[f64], rho: f64) -> u64 {
    let n = sorted.len();
    if rho >= 0.5 {
        return n as u64 * (n as u64 - 1) / 2;
    }
    let mut total = 0u64;
    let mut fwd = 0usize;
    let mut wrap = 0usize;
    for i in 0..n {
        if fwd < i + 1 {
            fwd = i + 1;
        }
        while fwd < n && sorted[fwd] - sorted[i] <= rho {
            fwd += 1;
        }
        total += (fwd - i - 1) as u64;
        if wrap < i + 1 {
            wrap = i + 1;
        }
        while wrap < n && !(1.0 - (sorted[wrap] - sorted[i]) <= rho) {
            wrap += 1;
        }
        total += (n - wrap.max(fwd)) as u64;
    }
    total
}

fn validate_scale(s: f64, alpha: f64) -> Result<()> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::InvalidArgument(format!("scale s must be finite and >= 0, got {s}")));
    }
    if !alpha.is_finite() || !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

fn normalized_count(sorted: &[f64], s: f64, alpha: f64, include_diagonal: bool) -> f64 {
    let n = sorted.len();
    let nf = n as f64;
    let rho = if alpha == 1.0 { s / nf } else { s / nf.powf(alpha) };
    let mut raw = 2 * count_within(sorted, rho);
    if include_diagonal {
        raw += n as u64;
    }
    let denom = if alpha == 1.0 { nf } else { nf.powf(2.0 - alpha) };
    raw as f64 / denom
}

/// Normalized pair count at scale `s/N^alpha` (ordered pairs, diagonal
/// optional), exact before the final division.
pub fn pair_count(pts: &PointSet, s: f64, alpha: f64, include_diagonal: bool) -> Result<f64> {
    validate_scale(s, alpha)?;
    Ok(normalized_count(&pts.sorted_values(), s, alpha, include_diagonal))
}

/// Pair-correlation values over an ascending grid of scales: one sort,
/// then the same counting kernel `pair_count` uses, so the curve equals
/// pointwise calls exactly.
pub fn pc_curve(
    pts: &PointSet,
    s_grid: &[f64],
    alpha: f64,
    include_diagonal: bool,
) -> Result<PairCorrCurve> {
    if s_grid.is_empty() {
        return Err(Error::InvalidArgument("s grid must be nonempty".into()));
    }
    for w in s_grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidArgument("s grid must be strictly ascending".into()));
        }
    }
    for &s in s_grid {
        validate_scale(s, alpha)?;
        if s <= 0.0 {
            return Err(Error::InvalidArgument("s grid values must be positive".into()));
        }
    }
    let sorted = pts.sorted_values();
    let values =
        s_grid.iter().map(|&s| normalized_count(&sorted, s, alpha, include_diagonal)).collect();
    Ok(PairCorrCurve { alpha, s_grid: s_grid.to_vec(), values, include_diagonal })
}

/// Slab decomposition of the Gaussian with certified sup error <= eps.
///
/// Mid-level slicing: `K = round(1/eps)` slabs of height eps, the k-th cut
/// at the half-level `(k - 1/2) eps`, so `b_k = sqrt(ln(1/((k - 1/2) eps)))`.
/// Centering the cuts halves the worst-case one-sided error of slicing at
/// whole levels. Accepts `eps` in `[STEP_MIN_EPS, 1)`.
pub fn step_approx_gaussian(eps: f64) -> Result<StepApprox> {
    if !eps.is_finite() || !(eps >= STEP_MIN_EPS && eps < 1.0) {
        return Err(Error::InvalidEps(eps));
    }
    let k_max = (1.0 / eps + 0.5).floor() as usize;
    let mut levels = Vec::with_capacity(k_max);
    for k in (1..=k_max).rev() {
        let level = (k as f64 - 0.5) * eps;
        if level >= 1.0 {
            // Only possible at k_max when 1/eps + 1/2 is an integer.
            continue;
        }
        levels.push((eps, (1.0 / level).ln().sqrt()));
    }
    Ok(StepApprox { levels, eps })
}

/// Gaussian pair energy reconstructed from counts alone:
/// `(1/N) sum_k a_k F(b_k)` with `alpha = 1` and the diagonal included,
/// which estimates `(1/N^2) sum_{m,n} exp(-N^2 d(x_m, x_n)^2)`.
pub fn energy_from_counts(pts: &PointSet, eps: f64) -> Result<f64> {
    let step = step_approx_gaussian(eps)?;
    let sorted = pts.sorted_values();
    let nf = sorted.len() as f64;
    let mut acc = NeumaierSum::new();
    for &(a, b) in &step.levels {
        acc.add(a * normalized_count(&sorted, b, 1.0, true));
    }
    Ok(acc.value() / nf)
}

/// The diagonal contribution `theta_t(0)/N` to the theta pair energy; of
/// order 1 at `t = N^{-2}` and vanishing when `t N^2 -> infinity`.
pub fn diagonal_weight(n_points: usize, t: f64) -> Result<f64> {
    if n_points == 0 {
        return Err(Error::EmptyPointSet);
    }
    Ok(crate::kernel::theta(0.0, t)? / n_points as f64)
}
