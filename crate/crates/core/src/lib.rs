//! Global phase portraits of planar polynomial vector fields
//!
//! ```text
//! x' = λx + Q1(x, y)
//! y' = λy + Q2(x, y)
//! ```
//!
//! where `λ ≠ 0` and `Q = (Q1, Q2)` is homogeneous of degree `n > 1`. The
//! linear part is a star node at the origin, so every invariant line through
//! the origin comes from an equilibrium on the circle at infinity of the
//! Poincaré disk. The crate computes those equilibria, the finite equilibria
//! sitting on the invariant radii, their stability, and the resulting global
//! portrait (global attractor/repellor, limit cycle, polycycle, heteroclinic
//! cycle, invariant-cone decomposition or degenerate continuum).
//!
//! Every symbolic verdict can be checked against the numerical [`oracle`],
//! which integrates the Cartesian and chart systems independently.
//!
//! Module map:
//!
//! - [`poly`]: homogeneous polynomials, the field type and the derived
//!   chart polynomials and angular functions.
//! - [`roots`]: real root isolation with multiplicities; angles of infinite
//!   equilibria.
//! - [`equilibria`]: finite equilibria and the stability of all equilibria.
//! - [`portrait`]: half-cones, sector pairs, the limit-cycle criterion,
//!   polycycle detection and portrait assembly.
//! - [`canonical`]: the degree-2 and degree-3 canonical families and their
//!   tabulated data at infinity.
//! - [`oracle`]: adaptive Runge–Kutta integration, return maps and the
//!   saddle-node perturbation experiment.
//! - [`report`]: JSON input/report schema, SVG rendering, sweeps, audits and
//!   the command-line front end.
//!
//! Radial stability at infinity follows one convention throughout: an
//! infinite equilibrium is *radially attracting* when nearby orbits move
//! toward the equator of the Poincaré disk (`R = r^(1-n) → 0`).

pub mod canonical;
pub mod config;
pub mod equilibria;
pub mod oracle;
pub mod poly;
pub mod portrait;
pub mod quadrature;
pub mod report;
pub mod roots;

pub use config::Tolerances;
pub use equilibria::{FiniteEquilibrium, StabilityTag, TopoType};
pub use poly::{HomogeneousPoly, Poly1D, StarField};
pub use portrait::{assemble_portrait, GlobalPortrait, Verdict};
pub use roots::{InfiniteEquilibrium, RealRoot};
