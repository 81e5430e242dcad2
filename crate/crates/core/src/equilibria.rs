//! Finite equilibria on the invariant radii and stability of every
//! equilibrium, finite or at infinity.
//!
//! In polar coordinates the field reads `r' = λr + f(θ)rⁿ`,
//! `θ' = g(θ)rⁿ⁻¹`. A zero `θ0` of `g` is an invariant radius; it carries a
//! finite equilibrium exactly when `λ f(θ0) < 0`, at `r0ⁿ⁻¹ = −λ/f(θ0)`.
//! There the Jacobian in `(r, θ)` is triangular with eigenvalues `−λ(n−1)`
//! and `g'(θ0)·(−λ/f(θ0))`.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::poly::StarField;
use crate::roots::InfiniteEquilibrium;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularStability {
    Attracting,
    Repelling,
    SemiStable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialStability {
    Attracting,
    Repelling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityTag {
    pub angular: AngularStability,
    pub radial: RadialStability,
    pub hyperbolic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopoType {
    NodeAttractor,
    NodeRepellor,
    Saddle,
    SaddleNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteEquilibrium {
    pub r0: f64,
    pub theta0: f64,
    pub x: f64,
    pub y: f64,
    pub multiplicity: usize,
    pub jac_eigen_radial: f64,
    pub jac_eigen_angular: f64,
    pub topo_type: TopoType,
    pub stability: StabilityTag,
}

/// An invariant radius where `|f(θ0)|` is too small to decide between an
/// equilibrium far out on the radius and none at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearZeroF {
    pub theta: f64,
    pub f_value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteScan {
    pub equilibria: Vec<FiniteEquilibrium>,
    pub boundary: Vec<NearZeroF>,
}

/// Angular stability along the circle at infinity.
///
/// Even multiplicity is semi-stable. For odd multiplicity `m` the sign of
/// `g^(m)(θ0)` decides; if that derivative is numerically flat the sign of
/// `g` on both sides is sampled instead.
fn angular_stability(field: &StarField, theta: f64, multiplicity: usize) -> AngularStability {
    if multiplicity.is_multiple_of(2) {
        return AngularStability::SemiStable;
    }
    let d = field.angular_coeff_derivative(theta, multiplicity);
    let s = if d.abs() > 1e-12 * field.coeff_scale() {
        d
    } else {
        let h = 1e-3;
        field.angular_coeff(theta + h) - field.angular_coeff(theta - h)
    };
    if s < 0.0 {
        AngularStability::Attracting
    } else {
        AngularStability::Repelling
    }
}

pub fn classify_infinite(field: &StarField, eq: &InfiniteEquilibrium, tol: &Tolerances) -> StabilityTag {
    let f = field.radial_coeff(eq.theta);
    let ftol = field.f_zero_threshold(tol);
    let radial = if f > ftol || (f.abs() <= ftol && field.lambda() > 0.0) {
        RadialStability::Attracting
    } else {
        RadialStability::Repelling
    };
    StabilityTag {
        angular: angular_stability(field, eq.theta, eq.multiplicity),
        radial,
        hyperbolic: eq.multiplicity == 1 && f.abs() > ftol,
    }
}

pub fn finite_equilibria(field: &StarField, infs: &[InfiniteEquilibrium], tol: &Tolerances) -> FiniteScan {
    let lambda = field.lambda();
    let n = field.degree() as f64;
    let ftol = field.f_zero_threshold(tol);
    let mut equilibria = Vec::new();
    let mut boundary = Vec::new();
    for inf in infs {
        let f = field.radial_coeff(inf.theta);
        if lambda * f >= 0.0 {
            continue;
        }
        if f.abs() <= ftol {
            boundary.push(NearZeroF {
                theta: inf.theta,
                f_value: f,
                threshold: ftol,
            });
            continue;
        }
        let w = -lambda / f;
        let r0 = w.powf(1.0 / (n - 1.0));
        let (s, c) = inf.theta.sin_cos();
        let mut eq = FiniteEquilibrium {
            r0,
            theta0: inf.theta,
            x: r0 * c,
            y: r0 * s,
            multiplicity: inf.multiplicity,
            jac_eigen_radial: -lambda * (n - 1.0),
            jac_eigen_angular: if inf.multiplicity == 1 {
                field.angular_coeff_derivative(inf.theta, 1) * w
            } else {
                0.0
            },
            topo_type: TopoType::SaddleNode,
            stability: classify_infinite(field, inf, tol),
        };
        let (stability, topo) = classify_finite(field, &eq);
        eq.stability = stability;
        eq.topo_type = topo;
        equilibria.push(eq);
    }
    FiniteScan { equilibria, boundary }
}

/// Stability and topological type of a finite equilibrium.
///
/// The angular direction inherits the stability of the infinite
/// equilibrium on the same radius; the radial direction is attracting iff
/// `λ > 0`.
pub fn classify_finite(field: &StarField, eq: &FiniteEquilibrium) -> (StabilityTag, TopoType) {
    let angular = angular_stability(field, eq.theta0, eq.multiplicity);
    let radial = if eq.jac_eigen_radial < 0.0 {
        RadialStability::Attracting
    } else {
        RadialStability::Repelling
    };
    let topo = match (angular, radial) {
        (AngularStability::SemiStable, _) => TopoType::SaddleNode,
        (AngularStability::Attracting, RadialStability::Attracting) => TopoType::NodeAttractor,
        (AngularStability::Repelling, RadialStability::Repelling) => TopoType::NodeRepellor,
        _ => TopoType::Saddle,
    };
    let tag = StabilityTag {
        angular,
        radial,
        hyperbolic: eq.multiplicity == 1,
    };
    (tag, topo)
}

/// Outcome of the counting bounds and pairing rules for one field.
///
/// `None` marks a check that does not apply to this degree or root
/// pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub degree: usize,
    pub infinite_count: usize,
    pub finite_count: usize,
    pub infinite_upper_bound: bool,
    pub even_degree_lower_bound: Option<bool>,
    pub finite_upper_bound: bool,
    pub multiple_of_four: Option<bool>,
    pub antipodal_closure: bool,
    pub finite_pairing: bool,
}

impl CountReport {
    pub fn all_pass(&self) -> bool {
        self.infinite_upper_bound
            && self.even_degree_lower_bound.unwrap_or(true)
            && self.finite_upper_bound
            && self.multiple_of_four.unwrap_or(true)
            && self.antipodal_closure
            && self.finite_pairing
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.infinite_upper_bound {
            v.push("more than 2(n+1) infinite equilibria");
        }
        if self.even_degree_lower_bound == Some(false) {
            v.push("even degree without infinite equilibria");
        }
        if !self.finite_upper_bound {
            v.push("too many finite equilibria");
        }
        if self.multiple_of_four == Some(false) {
            v.push("sign-changing infinite equilibria not a multiple of 4");
        }
        if !self.antipodal_closure {
            v.push("infinite equilibria not closed under antipodes");
        }
        if !self.finite_pairing {
            v.push("finite equilibria violate antipodal pairing");
        }
        v
    }
}

fn angle_close(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d) < 1e-9
}

pub fn check_counts(field: &StarField, infs: &[InfiniteEquilibrium], fins: &[FiniteEquilibrium]) -> CountReport {
    use std::f64::consts::PI;
    let n = field.degree();
    let ni = infs.len();
    let nf = fins.len();
    let odd = n % 2 == 1;
    let antipodal_closure = infs.iter().all(|e| {
        infs.iter()
            .any(|o| angle_close(o.theta, e.theta + PI) && o.multiplicity == e.multiplicity)
    });
    let has_fin = |t: f64| fins.iter().any(|q| angle_close(q.theta0, t));
    let finite_pairing = infs.iter().all(|e| {
        let here = has_fin(e.theta);
        let there = has_fin(e.theta + PI);
        if odd {
            here == there
        } else {
            !(here && there)
        }
    });
    let all_odd = infs.iter().all(|e| e.multiplicity % 2 == 1);
    CountReport {
        degree: n,
        infinite_count: ni,
        finite_count: nf,
        infinite_upper_bound: ni <= 2 * (n + 1),
        even_degree_lower_bound: (!odd).then_some(ni >= 2),
        finite_upper_bound: if odd { nf <= 2 * (n + 1) } else { nf <= n + 1 },
        multiple_of_four: (odd && all_odd).then_some(ni.is_multiple_of(4)),
        antipodal_closure,
        finite_pairing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::infinite_equilibria;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn hetero(lambda: f64) -> StarField {
        StarField::from_coeffs(lambda, vec![0.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    #[test]
    fn heteroclinic_fixture_finite_equilibria() {
        let f = hetero(1.0);
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        let scan = finite_equilibria(&f, &infs, &tol());
        assert!(scan.boundary.is_empty());
        assert_eq!(scan.equilibria.len(), 2);
        for (eq, y) in scan.equilibria.iter().zip([1.0, -1.0]) {
            assert!((eq.r0 - 1.0).abs() < 1e-12);
            assert!(eq.x.abs() < 1e-12 && (eq.y - y).abs() < 1e-12);
            assert_eq!(eq.jac_eigen_radial, -2.0);
            assert_eq!(eq.jac_eigen_angular, 0.0);
            assert_eq!(eq.topo_type, TopoType::SaddleNode);
        }
    }

    #[test]
    fn heteroclinic_fixture_at_infinity() {
        let f = hetero(1.0);
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        let tag = classify_infinite(&f, &infs[0], &tol());
        assert_eq!(infs[0].theta, FRAC_PI_2);
        assert_eq!(tag.radial, RadialStability::Repelling);
        assert_eq!(tag.angular, AngularStability::SemiStable);
        assert!(!tag.hyperbolic);
    }

    #[test]
    fn negative_lambda_flips_radial_eigenvalue() {
        let f = hetero(-1.0);
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        // f = −1 at both zeros, λ = −1: λf > 0, no finite equilibria.
        assert!(finite_equilibria(&f, &infs, &tol()).equilibria.is_empty());
        // Flip Q so that f = +1 there; equilibria reappear at r = 1.
        let g = StarField::new(-1.0, f.q1().scale(-1.0), f.q2().scale(-1.0)).unwrap();
        let scan = finite_equilibria(&g, &infs, &tol());
        assert_eq!(scan.equilibria.len(), 2);
        assert!(scan.equilibria.iter().all(|e| e.jac_eigen_radial == 2.0));
        assert!(scan
            .equilibria
            .iter()
            .all(|e| e.stability.radial == RadialStability::Repelling));
    }

    #[test]
    fn xx_yy_has_single_axis_equilibrium() {
        let f = StarField::from_coeffs(1.0, vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]).unwrap();
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        let tag0 = classify_infinite(&f, &infs[0], &tol());
        assert_eq!(tag0.radial, RadialStability::Attracting);
        assert!(tag0.hyperbolic);
        let fins = finite_equilibria(&f, &infs, &tol()).equilibria;
        let on_axis: Vec<_> = fins.iter().filter(|e| e.y.abs() < 1e-12).collect();
        assert_eq!(on_axis.len(), 1);
        assert!((on_axis[0].x + 1.0).abs() < 1e-12);
        assert!((on_axis[0].theta0 - PI).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_finite_difference_jacobian() {
        let f = StarField::from_coeffs(1.0, vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]).unwrap();
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        for eq in finite_equilibria(&f, &infs, &tol()).equilibria {
            let h = 1e-6;
            let fx = |x: f64, y: f64| f.eval(x, y);
            let dx = [
                (fx(eq.x + h, eq.y)[0] - fx(eq.x - h, eq.y)[0]) / (2.0 * h),
                (fx(eq.x + h, eq.y)[1] - fx(eq.x - h, eq.y)[1]) / (2.0 * h),
            ];
            let dy = [
                (fx(eq.x, eq.y + h)[0] - fx(eq.x, eq.y - h)[0]) / (2.0 * h),
                (fx(eq.x, eq.y + h)[1] - fx(eq.x, eq.y - h)[1]) / (2.0 * h),
            ];
            let tr = dx[0] + dy[1];
            let det = dx[0] * dy[1] - dy[0] * dx[1];
            let disc = tr * tr - 4.0 * det;
            assert!(disc > -1e-6);
            let s = disc.max(0.0).sqrt();
            let mut fd = [(tr - s) / 2.0, (tr + s) / 2.0];
            let mut ours = [eq.jac_eigen_radial, eq.jac_eigen_angular];
            fd.sort_by(f64::total_cmp);
            ours.sort_by(f64::total_cmp);
            assert!((fd[0] - ours[0]).abs() < 1e-5 && (fd[1] - ours[1]).abs() < 1e-5);
        }
    }

    #[test]
    fn count_checks_on_fixtures() {
        let f = hetero(1.0);
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        let fins = finite_equilibria(&f, &infs, &tol()).equilibria;
        let rep = check_counts(&f, &infs, &fins);
        assert!(rep.all_pass(), "{:?}", rep.violations());
        assert_eq!(rep.multiple_of_four, None);

        let q = StarField::from_coeffs(1.0, vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]).unwrap();
        let infs = infinite_equilibria(&q, &tol()).unwrap();
        let fins = finite_equilibria(&q, &infs, &tol()).equilibria;
        let rep = check_counts(&q, &infs, &fins);
        assert_eq!(rep.even_degree_lower_bound, Some(true));
        assert!(rep.all_pass());
    }
}
