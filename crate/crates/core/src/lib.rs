//! Equidistribution diagnostics built on circle/torus/sphere heat kernels.
//!
//! The central object is the periodic heat kernel on the unit circle,
//!
//! ```text
//! theta_t(x) = 1 + 2 sum_{n>=1} exp(-4 pi^2 n^2 t) cos(2 pi n x)
//!            = (4 pi t)^{-1/2} sum_{k in Z} exp(-(x+k)^2 / (4t)),
//! ```
//!
//! and the pair energy it induces on a point set `x_1..x_N` in `[0,1)`:
//! `E_t = (1/N^2) sum_{m,n} theta_t(x_n - x_m)`. The energy is always at
//! least `1` (the constant-density floor), decreases in `t`, and its excess
//! over `1` measures how far the set is from equidistributed at scale
//! `sqrt(t)`. The crate computes these energies by several independent
//! routes (direct, neighbor-truncated, spectral), together with exact
//! all-arcs discrepancy, pair-correlation statistics, step-function energy
//! reconstructions, and the analogous heat-kernel energies on flat tori and
//! the round 2-sphere.
//!
//! All reductions use fixed-order blocked compensated summation, so every
//! result is bit-stable across runs and thread counts.

pub mod discrepancy;
pub mod energy;
mod error;
pub mod kernel;
pub mod manifold;
pub mod paircorr;
pub mod points;
pub mod quadrature;
pub mod sequences;
pub mod special;
pub mod sum;

pub use discrepancy::{arc_discrepancy, bound_check, calibrate_c, star_discrepancy};
pub use discrepancy::{witness_deviation, BoundCheck, DiscrepancyResult};
pub use energy::{
    energy_profile, gaussian_energy, kernel_energy, theta_energy, theta_energy_fast,
    theta_energy_spectral, EnergyMethod, EnergyReport, ENERGY_DEFAULT_TOL, GAUSSIAN_TOL,
    SPECTRAL_FREQ_CAP,
};
pub use error::{Error, Result};
pub use kernel::{
    gaussian_kernel, kernel_eval, theta, theta_mass, theta_spatial, theta_spectral, theta_with,
    KernelSpec, ThetaParams, THETA_DEFAULT_TOL,
};
pub use manifold::{
    diagonal_floor, heat_energy, heat_kernel_circle, heat_kernel_sphere2, heat_kernel_torus_d,
    Circle, FlatTorus, HeatEnergyReport, Manifold, SpaceTag, Sphere2, MANIFOLD_DEFAULT_TOL,
    SPHERE2_MIN_T,
};
pub use paircorr::{
    diagonal_weight, energy_from_counts, pair_count, pc_curve, step_approx_gaussian,
    PairCorrCurve, StepApprox, STEP_MIN_EPS,
};
pub use points::{circ_dist, PointSet};
pub use sequences::{
    generate, generate_circle, read_points, read_points_file, write_points, write_points_file,
    GeneratedSet, GeneratorSpec,
};
