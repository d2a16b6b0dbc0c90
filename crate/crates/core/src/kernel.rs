//! Heat kernel of the unit circle (Jacobi theta function) and related
//! positive-definite kernels.
//!
//! The central object is the periodic heat kernel at time `t > 0`,
//! available through two independent series:
//!
//! ```text
//! spectral:  theta_t(x) = 1 + 2 * sum_{n>=1} exp(-4 pi^2 n^2 t) cos(2 pi n x)
//! spatial:   theta_t(x) = (4 pi t)^{-1/2} * sum_{k in Z} exp(-(x+k)^2 / (4t))
//! ```
//!
//! Both are evaluated with rigorous geometric tail bounds, so the absolute
//! truncation error is at most the requested tolerance. [`theta`] dispatches
//! on `t`: the spatial series below the crossover `t = 1/(4 pi)` and the
//! spectral series above it, where each needs the fewest terms.
//!
//! Evaluation is exact-symmetric: the argument is reduced to `[0, 1)` and
//! folded onto `[0, 1/2]` before any series runs. The fold `1 - f` is exact
//! for `f >= 1/2`, so `theta(x) == theta(1-x)` holds bitwise whenever `1-x`
//! is itself exactly representable (dyadic grids in particular); otherwise
//! the complement's rounding perturbs the argument by at most one ulp.

use crate::error::{Error, Result};
use crate::special::erf;
use crate::sum::NeumaierSum;

/// Default absolute truncation tolerance for kernel evaluation.
pub const THETA_DEFAULT_TOL: f64 = 1e-14;

/// Dispatch point between the spatial and spectral series: at
/// `t = 1/(4 pi)` the decay rates `4 pi^2 t` and `1/(4t)` coincide.
pub(crate) const CROSSOVER_T: f64 = 1.0 / (4.0 * std::f64::consts::PI);

/// Heat time plus truncation tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaParams {
    pub t: f64,
    pub tol: f64,
}

impl ThetaParams {
    /// Uses the default tolerance [`THETA_DEFAULT_TOL`].
    pub fn new(t: f64) -> Result<Self> {
        Self::with_tol(t, THETA_DEFAULT_TOL)
    }

    pub fn with_tol(t: f64, tol: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidTime(t));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidTolerance(tol));
        }
        Ok(Self { t, tol })
    }
}

/// Reduces `x` to `[0, 1)`.
#[inline]
pub(crate) fn reduce_unit(x: f64) -> f64 {
    let mut f = x - x.floor();
    if f >= 1.0 {
        f -= 1.0;
    }
    f
}

/// Folds a point of `[0, 1)` onto `[0, 1/2]` using the exact operation
/// `1 - f` (exact for `f >= 1/2` by the Sterbenz lemma), so evaluating at
/// `x` and `1 - x` yields bitwise identical series input.
#[inline]
fn fold_half(f: f64) -> f64 {
    if f > 0.5 {
        1.0 - f
    } else {
        f
    }
}

/// Fractional part of `n * x` with the product's rounding error restored
/// via fused multiply-add, for accurate phase reduction at large `n`.
/// Requires `x >= 0`.
#[inline]
pub(crate) fn frac_mul(n: f64, x: f64) -> f64 {
    let p = n * x;
    let e = n.mul_add(x, -p);
    let mut f = p.fract() + e;
    if f >= 1.0 {
        f -= 1.0;
    } else if f < 0.0 {
        f += 1.0;
    }
    f
}

#[inline]
pub(crate) fn cos_2pi_frac(n: f64, x: f64) -> f64 {
    (std::f64::consts::TAU * frac_mul(n, x)).cos()
}

#[inline]
pub(crate) fn sin_2pi_frac(n: f64, x: f64) -> f64 {
    (std::f64::consts::TAU * frac_mul(n, x)).sin()
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFiniteCoordinate(x));
    }
    Ok(())
}

/// Fourier-side evaluation of the circle heat kernel.
///
/// Sums `1 + 2 sum exp(-4 pi^2 n^2 t) cos(2 pi n x)` until the geometric
/// tail bound `2 exp(-c (n+1)^2) / (1 - exp(-c (2n+3)))`, `c = 4 pi^2 t`,
/// drops below `p.tol`, so the absolute error is at most `p.tol`.
pub fn theta_spectral(x: f64, p: &ThetaParams) -> Result<f64> {
    check_x(x)?;
    let xf = fold_half(reduce_unit(x));
    let c = 4.0 * std::f64::consts::PI * std::f64::consts::PI * p.t;
    let mut acc = NeumaierSum::new();
    acc.add(1.0);
    let mut n = 1u64;
    loop {
        let tail = 2.0 * (-c * (n * n) as f64).exp() / (1.0 - (-c * (2 * n + 1) as f64).exp());
        if tail < p.tol {
            break;
        }
        acc.add(2.0 * (-c * (n * n) as f64).exp() * cos_2pi_frac(n as f64, xf));
        n += 1;
        if n > 100_000_000 {
            return Err(Error::InvalidTime(p.t));
        }
    }
    Ok(acc.value())
}

/// Image-sum (wrapped Gaussian) evaluation of the circle heat kernel.
///
/// Sums `(4 pi t)^{-1/2} exp(-(x+k)^2/(4t))` over integer images `k`,
/// stopping each side once the geometric tail bound falls below
/// `p.tol / 2`, so the absolute error is at most `p.tol`.
pub fn theta_spatial(x: f64, p: &ThetaParams) -> Result<f64> {
    check_x(x)?;
    let xf = fold_half(reduce_unit(x));
    let inv4t = 1.0 / (4.0 * p.t);
    let pref = 1.0 / (4.0 * std::f64::consts::PI * p.t).sqrt();
    let mut acc = NeumaierSum::new();
    for start in [xf, 1.0 - xf] {
        let mut u = start;
        loop {
            let term = (-u * u * inv4t).exp();
            acc.add(term);
            let q = (-(2.0 * u + 1.0) * inv4t).exp();
            if pref * term * q / (1.0 - q) < p.tol / 2.0 {
                break;
            }
            u += 1.0;
        }
    }
    Ok(pref * acc.value())
}

/// Circle heat kernel at time `t` with the default tolerance, routed to
/// whichever series converges faster at this `t`.
pub fn theta(x: f64, t: f64) -> Result<f64> {
    let p = ThetaParams::new(t)?;
    theta_with(x, &p)
}

/// Routed evaluation with explicit parameters.
pub fn theta_with(x: f64, p: &ThetaParams) -> Result<f64> {
    if p.t < CROSSOVER_T {
        theta_spatial(x, p)
    } else {
        theta_spectral(x, p)
    }
}

/// Mass of the circle heat kernel over the arc `[a, b]`, `b - a <= 1`.
///
/// Term-by-term integral of whichever series [`theta`] would select:
///
/// ```text
/// spectral: (b-a) + sum_n (exp(-4 pi^2 n^2 t)/(pi n)) (sin 2 pi n b - sin 2 pi n a)
/// spatial:  sum_k (erf((b+k)/(2 sqrt t)) - erf((a+k)/(2 sqrt t))) / 2
/// ```
///
/// The result is clamped to `[0, 1]`; truncation error is at most `p.tol`.
pub fn theta_mass(a: f64, b: f64, p: &ThetaParams) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval { a, b, reason: "endpoints must be finite" });
    }
    if b < a {
        return Err(Error::InvalidInterval { a, b, reason: "requires a <= b" });
    }
    if b - a > 1.0 {
        return Err(Error::InvalidInterval { a, b, reason: "arc length exceeds the circle" });
    }
    let m = if p.t < CROSSOVER_T {
        theta_mass_spatial(a, b, p)
    } else {
        theta_mass_spectral(a, b, p)
    };
    Ok(m.clamp(0.0, 1.0))
}

fn theta_mass_spectral(a: f64, b: f64, p: &ThetaParams) -> f64 {
    // Shifting both endpoints by an integer leaves every term invariant,
    // so reduce to nonnegative endpoints for clean phase reduction.
    let len = b - a;
    let a0 = reduce_unit(a);
    let b0 = a0 + len;
    let c = 4.0 * std::f64::consts::PI * std::f64::consts::PI * p.t;
    let mut acc = NeumaierSum::new();
    acc.add(len);
    let mut n = 1u64;
    loop {
        let nf = n as f64;
        let tail =
            2.0 * (-c * nf * nf).exp() / (std::f64::consts::PI * nf * (1.0 - (-c * (2 * n + 1) as f64).exp()));
        if tail < p.tol {
            break;
        }
        let w = (-c * nf * nf).exp() / (std::f64::consts::PI * nf);
        acc.add(w * (sin_2pi_frac(nf, b0) - sin_2pi_frac(nf, a0)));
        n += 1;
    }
    acc.value()
}

fn theta_mass_spatial(a: f64, b: f64, p: &ThetaParams) -> f64 {
    let s = 2.0 * p.t.sqrt();
    let mut acc = NeumaierSum::new();
    // Images k = 0, 1, 2, ...: the remaining intervals [a+k+1, b+k+1], ...
    // are disjoint subsets of [a+k+1, inf), so their total mass is below
    // erfc((a+k+1)/s)/2. Mirror argument on the negative side.
    let mut k = 0.0f64;
    loop {
        acc.add(0.5 * (erf((b + k) / s) - erf((a + k) / s)));
        if 0.5 * crate::special::erfc((a + k + 1.0) / s) < p.tol / 2.0 {
            break;
        }
        k += 1.0;
    }
    let mut k = -1.0f64;
    loop {
        acc.add(0.5 * (erf((b + k) / s) - erf((a + k) / s)));
        if 0.5 * crate::special::erfc(-(b + k - 1.0) / s) < p.tol / 2.0 {
            break;
        }
        k -= 1.0;
    }
    acc.value()
}

/// Sharp Gaussian surrogate `t^{-1/2} exp(-d^2/t)` for a circle-distance
/// representative `d` in `[-1/2, 1/2]`.
pub fn gaussian_kernel(d: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidTime(t));
    }
    if !d.is_finite() || d.abs() > 0.5 {
        return Err(Error::NonFiniteCoordinate(d));
    }
    Ok((-d * d / t).exp() / t.sqrt())
}

/// A symmetric positive-definite kernel on the circle given by finitely
/// many nonnegative Fourier coefficients, `K(x) = c_0 + 2 sum c_l cos(2 pi l x)`
/// with unit mean `c_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec {
    coeffs: Vec<f64>,
    pub description: String,
}

impl KernelSpec {
    /// `coeffs[l]` is the coefficient of frequency `l`; requires
    /// `coeffs[0] == 1` and every coefficient finite and nonnegative.
    pub fn new(coeffs: Vec<f64>, description: impl Into<String>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidKernel("no coefficients".into()));
        }
        if coeffs[0] != 1.0 {
            return Err(Error::InvalidKernel(format!(
                "mean coefficient must be 1, got {}",
                coeffs[0]
            )));
        }
        for (l, &c) in coeffs.iter().enumerate() {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::InvalidKernel(format!(
                    "coefficient at frequency {l} is {c}"
                )));
            }
        }
        Ok(Self { coeffs, description: description.into() })
    }

    /// Truncated coefficient sequence of the circle heat kernel,
    /// `c_l = exp(-4 pi^2 l^2 t)`, cut where the spectral tail bound
    /// drops below `tol`.
    pub fn theta_coeffs(t: f64, tol: f64) -> Result<Self> {
        let p = ThetaParams::with_tol(t, tol)?;
        let c = 4.0 * std::f64::consts::PI * std::f64::consts::PI * p.t;
        let mut coeffs = vec![1.0];
        let mut l = 1u64;
        loop {
            let tail = 2.0 * (-c * (l * l) as f64).exp() / (1.0 - (-c * (2 * l + 1) as f64).exp());
            if tail < tol {
                break;
            }
            coeffs.push((-c * (l * l) as f64).exp());
            l += 1;
        }
        Self::new(coeffs, format!("heat kernel t={t}"))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Evaluates a spectral kernel at circle point `x`. The argument is
/// reduced and folded exactly as in [`theta`], so `kernel_eval(k, x) ==
/// kernel_eval(k, 1 - x)` bitwise.
pub fn kernel_eval(k: &KernelSpec, x: f64) -> Result<f64> {
    check_x(x)?;
    let xf = fold_half(reduce_unit(x));
    let mut acc = NeumaierSum::new();
    acc.add(k.coeffs[0]);
    for (l, &c) in k.coeffs.iter().enumerate().skip(1) {
        acc.add(2.0 * c * cos_2pi_frac(l as f64, xf));
    }
    Ok(acc.value())
}
