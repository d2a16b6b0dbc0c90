//! Heat kernels and pair energies on compact manifolds.
//!
//! A [`Manifold`] supplies a volume, a geodesic distance, and a pointwise
//! heat-kernel evaluator with a guaranteed absolute error bound. Built-ins:
//! the unit circle, the flat torus `T^d` (product of circle kernels), and
//! the round 2-sphere via the spherical-harmonic addition theorem,
//!
//! ```text
//! K_t(x, y) = sum_{l>=0} ((2l+1)/(4 pi)) exp(-l(l+1) t) P_l(<x, y>),
//! ```
//!
//! with Legendre polynomials by three-term recurrence.
//!
//! The pair energy `(1/N^2) sum_{m,n} K_t(x_m, x_n)` is bounded below by
//! `1/vol(M)` for every point set and every `t > 0`, approaching it
//! exactly when the set equidistributes; `excess` in the report is the
//! distance to that floor.

use rayon::prelude::*;

use crate::energy::EnergyMethod;
use crate::error::{Error, Result};
use crate::kernel::{theta_with, ThetaParams};
use crate::points::circ_dist;
use crate::sum::{pairwise_sum, NeumaierSum};

/// Smallest admissible time for the sphere kernel: below this the
/// eigenvalue series needs more than a few thousand terms.
pub const SPHERE2_MIN_T: f64 = 1e-4;

/// Default evaluation tolerance for manifold kernels.
pub const MANIFOLD_DEFAULT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceTag {
    Circle,
    TorusD(usize),
    Sphere2,
}

impl std::fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpaceTag::Circle => f.write_str("circle"),
            SpaceTag::TorusD(d) => write!(f, "torus{d}"),
            SpaceTag::Sphere2 => f.write_str("sphere2"),
        }
    }
}

/// A compact manifold described by the data needed to sum heat-kernel
/// pair energies: volume, kernel evaluator with error control, distance.
pub trait Manifold {
    type Point: Clone + Sync + Send;

    fn volume(&self) -> f64;
    fn space_tag(&self) -> SpaceTag;
    fn validate_point(&self, x: &Self::Point) -> Result<()>;
    /// Heat kernel `[e^{t Delta} delta_x](y)` with absolute error <= tol.
    fn kernel(&self, x: &Self::Point, y: &Self::Point, t: f64, tol: f64) -> Result<f64>;
    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;
    /// On-diagonal kernel value; position-independent on the built-ins
    /// (all are homogeneous spaces).
    fn on_diagonal(&self, t: f64, tol: f64) -> Result<f64>;
}

/// The unit-length circle `R/Z`; volume 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct Circle;

impl Manifold for Circle {
    type Point = f64;

    fn volume(&self) -> f64 {
        1.0
    }

    fn space_tag(&self) -> SpaceTag {
        SpaceTag::Circle
    }

    fn validate_point(&self, x: &f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFiniteCoordinate(*x));
        }
        if !(0.0..1.0).contains(x) {
            return Err(Error::CoordinateOutOfRange(*x));
        }
        Ok(())
    }

    fn kernel(&self, x: &f64, y: &f64, t: f64, tol: f64) -> Result<f64> {
        heat_kernel_circle(*x, *y, t, tol)
    }

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        circ_dist(*x, *y)
    }

    fn on_diagonal(&self, t: f64, tol: f64) -> Result<f64> {
        theta_with(0.0, &ThetaParams::with_tol(t, tol)?)
    }
}

/// The flat torus `(R/Z)^d`; volume 1. Its heat kernel is the product of
/// `d` circle kernels, each evaluated with per-factor tolerance `tol/d`.
#[derive(Clone, Copy, Debug)]
pub struct FlatTorus {
    pub d: usize,
}

impl FlatTorus {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch { got: 0, expected: 1 });
        }
        Ok(Self { d })
    }
}

impl Manifold for FlatTorus {
    type Point = Vec<f64>;

    fn volume(&self) -> f64 {
        1.0
    }

    fn space_tag(&self) -> SpaceTag {
        SpaceTag::TorusD(self.d)
    }

    fn validate_point(&self, x: &Vec<f64>) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch { got: x.len(), expected: self.d });
        }
        for &c in x {
            if !c.is_finite() {
                return Err(Error::NonFiniteCoordinate(c));
            }
            if !(0.0..1.0).contains(&c) {
                return Err(Error::CoordinateOutOfRange(c));
            }
        }
        Ok(())
    }

    fn kernel(&self, x: &Vec<f64>, y: &Vec<f64>, t: f64, tol: f64) -> Result<f64> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch { got: x.len(), expected: self.d });
        }
        heat_kernel_torus_d(x, y, t, tol)
    }

    fn distance(&self, x: &Vec<f64>, y: &Vec<f64>) -> f64 {
        x.iter()
            .zip(y)
            .map(|(a, b)| {
                let d = circ_dist(*a, *b);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    fn on_diagonal(&self, t: f64, tol: f64) -> Result<f64> {
        let p = ThetaParams::with_tol(t, tol / self.d as f64)?;
        let v = theta_with(0.0, &p)?;
        Ok(v.powi(self.d as i32))
    }
}

/// The round unit 2-sphere; volume `4 pi`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sphere2;

impl Manifold for Sphere2 {
    type Point = [f64; 3];

    fn volume(&self) -> f64 {
        4.0 * std::f64::consts::PI
    }

    fn space_tag(&self) -> SpaceTag {
        SpaceTag::Sphere2
    }

    fn validate_point(&self, x: &[f64; 3]) -> Result<()> {
        let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(())
    }

    fn kernel(&self, x: &[f64; 3], y: &[f64; 3], t: f64, tol: f64) -> Result<f64> {
        heat_kernel_sphere2(x, y, t, tol)
    }

    /// Geodesic distance via atan2 of the cross and dot products, accurate
    /// near both the diagonal and the antipode.
    fn distance(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        let dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
        let cx = x[1] * y[2] - x[2] * y[1];
        let cy = x[2] * y[0] - x[0] * y[2];
        let cz = x[0] * y[1] - x[1] * y[0];
        let cross = (cx * cx + cy * cy + cz * cz).sqrt();
        cross.atan2(dot)
    }

    fn on_diagonal(&self, t: f64, tol: f64) -> Result<f64> {
        sphere2_series(1.0, t, tol)
    }
}

/// Circle heat kernel: `theta_t(x - y)`.
pub fn heat_kernel_circle(x: f64, y: f64, t: f64, tol: f64) -> Result<f64> {
    let p = ThetaParams::with_tol(t, tol)?;
    theta_with(x - y, &p)
}

/// Flat-torus heat kernel: product of per-coordinate circle kernels, each
/// with tolerance `tol/d`. The factors can exceed 1, so the product's
/// absolute error scales with the co-factor magnitudes.
pub fn heat_kernel_torus_d(x: &[f64], y: &[f64], t: f64, tol: f64) -> Result<f64> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::DimensionMismatch { got: y.len(), expected: x.len().max(1) });
    }
    let p = ThetaParams::with_tol(t, tol / x.len() as f64)?;
    let mut prod = 1.0;
    for (a, b) in x.iter().zip(y) {
        prod *= theta_with(a - b, &p)?;
    }
    Ok(prod)
}

/// Sphere heat kernel by the addition-theorem series in `u = <x, y>`.
fn sphere2_series(u: f64, t: f64, tol: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidTime(t));
    }
    if t < SPHERE2_MIN_T {
        return Err(Error::TimeBelowFloor { got: t, min: SPHERE2_MIN_T });
    }
    let u = u.clamp(-1.0, 1.0);
    let quarter_pi_inv = 1.0 / (4.0 * std::f64::consts::PI);
    let mut acc = NeumaierSum::new();
    let mut p_prev = 1.0; // P_0
    let mut p_cur = u; // P_1
    acc.add(quarter_pi_inv);
    let mut l = 1u64;
    loop {
        let lf = l as f64;
        let bound = (2.0 * lf + 1.0) * quarter_pi_inv * (-lf * (lf + 1.0) * t).exp();
        // Term-ratio bound beyond l: ((2l+3)/(2l+1)) e^{-2(l+1)t}.
        let q = (2.0 * lf + 3.0) / (2.0 * lf + 1.0) * (-2.0 * (lf + 1.0) * t).exp();
        if q < 1.0 && bound / (1.0 - q) < tol / 2.0 {
            break;
        }
        acc.add(bound * p_cur);
        let p_next = ((2.0 * lf + 1.0) * u * p_cur - lf * p_prev) / (lf + 1.0);
        p_prev = p_cur;
        p_cur = p_next;
        l += 1;
        if l > 1_000_000 {
            return Err(Error::TimeBelowFloor { got: t, min: SPHERE2_MIN_T });
        }
    }
    Ok(acc.value())
}

/// Sphere heat kernel between unit vectors (checked to 1e-12).
pub fn heat_kernel_sphere2(x: &[f64; 3], y: &[f64; 3], t: f64, tol: f64) -> Result<f64> {
    Sphere2.validate_point(x)?;
    Sphere2.validate_point(y)?;
    let u = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    sphere2_series(u, t, tol)
}

/// One heat-kernel pair-energy evaluation on a manifold.
#[derive(Clone, Copy, Debug)]
pub struct HeatEnergyReport {
    pub n_points: usize,
    pub t: f64,
    pub energy: f64,
    /// `energy - 1/vol`, the distance to the equidistribution floor.
    pub excess: f64,
    pub method: EnergyMethod,
    pub error_bound: f64,
}

/// Heat-kernel pair energy `(1/N^2) sum_{m,n} K_t(x_m, x_n)` by the
/// direct double sum, each kernel evaluation carrying per-pair tolerance
/// `tol/N^2`. The reduction order is fixed, so the result is bit-stable
/// across runs and thread counts.
pub fn heat_energy<M: Manifold + Sync>(
    m: &M,
    pts: &[M::Point],
    t: f64,
    tol: f64,
) -> Result<HeatEnergyReport> {
    if pts.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    for p in pts {
        m.validate_point(p)?;
    }
    let n = pts.len();
    let nf = n as f64;
    let pair_tol = tol / (nf * nf);
    let diag: Result<Vec<f64>> = pts.par_iter().map(|p| m.kernel(p, p, t, pair_tol)).collect();
    let rows: Result<Vec<f64>> = (0..n.saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let mut acc = NeumaierSum::new();
            for j in (i + 1)..n {
                acc.add(m.kernel(&pts[i], &pts[j], t, pair_tol)?);
            }
            Ok(acc.value())
        })
        .collect();
    let energy = (pairwise_sum(&diag?) + 2.0 * pairwise_sum(&rows?)) / (nf * nf);
    let floor = 1.0 / m.volume();
    Ok(HeatEnergyReport {
        n_points: n,
        t,
        energy,
        excess: energy - floor,
        method: EnergyMethod::Direct,
        error_bound: tol,
    })
}

/// The diagonal contribution `K_t(x, x)/N` alone: a position-independent
/// lower bound on the pair energy of any `N`-point set.
pub fn diagonal_floor<M: Manifold>(m: &M, n_points: usize, t: f64) -> Result<f64> {
    if n_points == 0 {
        return Err(Error::EmptyPointSet);
    }
    Ok(m.on_diagonal(t, MANIFOLD_DEFAULT_TOL)? / n_points as f64)
}
