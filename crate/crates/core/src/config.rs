//! Numerical tolerances shared by the analysis pipeline.
//!
//! Every report records the [`Tolerances`] it was produced with.

use serde::{Deserialize, Serialize};

/// Absolute threshold below which a coefficient (scaled by the field's
/// coefficient magnitude) counts as zero.
pub const ZERO_COEFF_TOL: f64 = 1e-12;

/// Relative tolerance for accepting a critical point as a root.
pub const ROOT_TOL: f64 = 1e-9;

/// Relative tolerance of the derivative test that fixes root multiplicity.
pub const MULTIPLICITY_TOL: f64 = 1e-7;

/// Roots closer than `CLUSTER_TOL * (1 + |u|)` are merged.
pub const CLUSTER_TOL: f64 = 1e-9;

/// `|f(θ0)| <= F_ZERO_TOL * (1 + max|f|)` is treated as `f(θ0) = 0`.
pub const F_ZERO_TOL: f64 = 1e-9;

/// Absolute tolerance for the limit-cycle criterion integral.
pub const QUAD_TOL: f64 = 1e-8;

/// Minimum of `|g|` on the guard grid required before integrating `f/|g|`.
pub const GUARD_MIN_G: f64 = 1e-6;

/// Number of grid points used by the quadrature guard.
pub const GUARD_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero_coeff: f64,
    pub root: f64,
    pub multiplicity: f64,
    pub cluster: f64,
    pub f_zero: f64,
    pub quad: f64,
    pub guard_min_g: f64,
    pub guard_grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_coeff: ZERO_COEFF_TOL,
            root: ROOT_TOL,
            multiplicity: MULTIPLICITY_TOL,
            cluster: CLUSTER_TOL,
            f_zero: F_ZERO_TOL,
            quad: QUAD_TOL,
            guard_min_g: GUARD_MIN_G,
            guard_grid: GUARD_GRID,
        }
    }
}
