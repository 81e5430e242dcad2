//! Real root isolation for one-variable polynomials and the angles of the
//! equilibria at infinity.
//!
//! Isolation recurses on the derivative. The real roots of `p'` split the
//! line into intervals on which `p` is monotone; a sign change on such an
//! interval brackets exactly one simple crossing, refined by bisection. A
//! critical point where `p` is numerically zero is itself a (multiple) root.
//! Multiplicities come from a scaled derivative test and are then made
//! consistent with the observed sign pattern.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Tolerances;
use crate::poly::{HomogeneousPoly, Poly1D, StarField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial is identically zero")]
    IdenticallyZero,
    #[error("y Q1 = x Q2: every point at infinity is an equilibrium")]
    DegenerateContinuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
    pub interval_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    U1,
    V1,
    U2,
    V2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfiniteEquilibrium {
    pub theta: f64,
    pub chart: Chart,
    pub multiplicity: usize,
}

/// All real roots of `p` with multiplicities, sorted ascending.
///
/// Coefficients below `tol.zero_coeff * max(1, max|c|)` are discarded
/// first; if nothing remains the polynomial is reported as identically zero.
pub fn real_roots(p: &Poly1D, tol: &Tolerances) -> Result<Vec<RealRoot>, RootError> {
    let cleaned = p.cleaned(tol.zero_coeff * p.max_abs().max(1.0));
    roots_of_cleaned(&cleaned, tol)
}

fn roots_of_cleaned(p: &Poly1D, tol: &Tolerances) -> Result<Vec<RealRoot>, RootError> {
    let Some(deg) = p.degree() else {
        return Err(RootError::IdenticallyZero);
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let distinct = merge_cluster(distinct_roots(p, tol), tol);
    let mut roots: Vec<RealRoot> = distinct
        .into_iter()
        .map(|(value, interval_width)| RealRoot {
            value,
            multiplicity: multiplicity_at(p, value, tol),
            interval_width,
        })
        .collect();
    fix_parity(p, &mut roots);
    Ok(roots)
}

/// Largest `m` such that `p^(j)(u0)` is negligible for all `1 <= j < m`.
///
/// Derivative `j` counts as zero when
/// `|p^(j)(u0)| < tol.multiplicity * j! * max(1,|u0|)^(deg-j) * max|c|`.
pub fn multiplicity_at(p: &Poly1D, u0: f64, tol: &Tolerances) -> usize {
    let Some(deg) = p.degree() else { return 0 };
    let scale = p.max_abs();
    let base = u0.abs().max(1.0);
    let mut d = p.derivative();
    let mut m = 1;
    let mut fact = 1.0;
    for j in 1..deg {
        fact *= j as f64;
        let bound = tol.multiplicity * fact * base.powi((deg - j) as i32) * scale;
        if d.eval(u0).abs() >= bound {
            break;
        }
        m += 1;
        d = d.derivative();
    }
    m
}

fn cauchy_bound(p: &Poly1D) -> f64 {
    let c = p.coeffs();
    let lead = c[c.len() - 1].abs();
    1.0 + c[..c.len() - 1]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs() / lead))
}

/// Distinct roots as `(value, bracket width)`.
fn distinct_roots(p: &Poly1D, tol: &Tolerances) -> Vec<(f64, f64)> {
    let c = p.coeffs();
    let deg = c.len() - 1;
    if deg == 1 {
        return vec![(-c[0] / c[1], 0.0)];
    }
    let crit = distinct_roots(&p.derivative(), tol);
    let bound = cauchy_bound(p);
    let scale = p.max_abs();

    let mut pts = Vec::with_capacity(crit.len() + 2);
    pts.push((-bound, p.eval(-bound), 0.0, false));
    for &(u, w) in &crit {
        if u.abs() >= bound {
            continue;
        }
        let v = p.eval(u);
        let near_zero = v.abs() <= tol.root * u.abs().max(1.0).powi(deg as i32) * scale;
        pts.push((u, if near_zero { 0.0 } else { v }, w, near_zero));
    }
    pts.push((bound, p.eval(bound), 0.0, false));

    let mut out = Vec::new();
    for (i, &(u, _, w, is_root)) in pts.iter().enumerate() {
        if is_root {
            out.push((u, w));
        }
        if let Some(&(b, vb, _, _)) = pts.get(i + 1) {
            let va = pts[i].1;
            if va != 0.0 && vb != 0.0 && (va < 0.0) != (vb < 0.0) {
                out.push(bisect(p, u, b, va));
            }
        }
    }
    out
}

fn bisect(p: &Poly1D, mut a: f64, mut b: f64, va: f64) -> (f64, f64) {
    let neg_a = va < 0.0;
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || b - a <= 1e-13 * m.abs().max(1.0) {
            return (m, b - a);
        }
        let vm = p.eval(m);
        if vm == 0.0 {
            return (m, 0.0);
        }
        if (vm < 0.0) == neg_a {
            a = m;
        } else {
            b = m;
        }
    }
}

fn merge_cluster(mut roots: Vec<(f64, f64)>, tol: &Tolerances) -> Vec<(f64, f64)> {
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last_mut() {
            Some(last) if (r.0 - last.0).abs() <= tol.cluster * (1.0 + r.0.abs()) => {
                last.1 = last.1.max(r.1);
            }
            _ => out.push(r),
        }
    }
    out
}

/// Adjust multiplicities so that odd multiplicity coincides with a sign
/// change of `p` across the root.
fn fix_parity(p: &Poly1D, roots: &mut [RealRoot]) {
    if roots.is_empty() {
        return;
    }
    let bound = cauchy_bound(p).max(roots.iter().fold(0.0f64, |m, r| m.max(r.value.abs())) + 1.0);
    let mut probes = Vec::with_capacity(roots.len() + 1);
    probes.push(-bound);
    for w in roots.windows(2) {
        probes.push(0.5 * (w[0].value + w[1].value));
    }
    probes.push(bound);
    let signs: Vec<f64> = probes.iter().map(|&u| p.eval(u).signum()).collect();
    let deg = p.degree().unwrap_or(0);
    for (i, r) in roots.iter_mut().enumerate() {
        let changes = signs[i] != signs[i + 1];
        let odd = r.multiplicity % 2 == 1;
        if changes && !odd {
            r.multiplicity -= 1;
        } else if !changes && odd {
            r.multiplicity = (r.multiplicity + 1).min(deg);
        }
        r.multiplicity = r.multiplicity.max(1);
    }
}

/// Number of distinct real roots in `(a, b]`, by a Sturm sequence.
pub fn sturm_count(p: &Poly1D, a: f64, b: f64) -> usize {
    let seq = sturm_sequence(p);
    let va = sign_variations(&seq, a);
    let vb = sign_variations(&seq, b);
    va.saturating_sub(vb)
}

fn sturm_sequence(p: &Poly1D) -> Vec<Poly1D> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let r = poly_rem(&seq[n - 2], &seq[n - 1]).scale(-1.0);
        let tiny = 1e-10 * seq[0].max_abs().max(1.0);
        let r = r.cleaned(tiny);
        if r.degree().is_none() {
            break;
        }
        let norm = r.max_abs();
        seq.push(r.scale(1.0 / norm));
        if seq.last().unwrap().degree() == Some(0) {
            break;
        }
    }
    seq
}

fn poly_rem(a: &Poly1D, b: &Poly1D) -> Poly1D {
    let mut r = a.coeffs().to_vec();
    let bc = b.coeffs();
    let db = bc.len() - 1;
    let lead = bc[db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let q = r[k] / lead;
        for i in 0..=db {
            r[k - db + i] -= q * bc[i];
        }
        r.pop();
    }
    Poly1D::new(r)
}

fn sign_variations(seq: &[Poly1D], u: f64) -> usize {
    let mut last = 0.0;
    let mut count = 0;
    for s in seq {
        let v = s.eval(u);
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v < 0.0) != (last < 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

fn normalize_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // A root found a few ulps below zero belongs at 0, not just below 2π.
    if r >= TAU - 1e-12 {
        0.0
    } else {
        r
    }
}

/// Zeros on the unit circle of a homogeneous polynomial, with their
/// multiplicities, sorted by angle.
///
/// Slopes `u` of zeros with `x != 0` come from `P(1, u)`; the direction
/// `x = 0` is a zero iff the coefficient of `y^n` vanishes, with multiplicity
/// the number of vanishing trailing coefficients.
pub fn circle_zeros(p: &HomogeneousPoly, tol: &Tolerances) -> Result<Vec<InfiniteEquilibrium>, RootError> {
    let thr = tol.zero_coeff * p.max_abs().max(1.0);
    let in_u1 = p.at_x_one().cleaned(thr);
    if in_u1.degree().is_none() {
        return Err(RootError::IdenticallyZero);
    }
    let mut out = Vec::new();
    for r in roots_of_cleaned(&in_u1, tol)? {
        let theta = normalize_angle(r.value.atan());
        out.push(InfiniteEquilibrium {
            theta,
            chart: Chart::U1,
            multiplicity: r.multiplicity,
        });
        out.push(InfiniteEquilibrium {
            theta: normalize_angle(theta + PI),
            chart: Chart::V1,
            multiplicity: r.multiplicity,
        });
    }
    let vertical = p
        .coeffs()
        .iter()
        .rev()
        .take_while(|c| c.abs() <= thr)
        .count();
    if vertical > 0 {
        for (theta, chart) in [(FRAC_PI_2, Chart::U2), (3.0 * FRAC_PI_2, Chart::V2)] {
            out.push(InfiniteEquilibrium {
                theta,
                chart,
                multiplicity: vertical,
            });
        }
    }
    out.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(out)
}

/// Equilibria on the circle at infinity, i.e. the zeros of `g`.
pub fn infinite_equilibria(field: &StarField, tol: &Tolerances) -> Result<Vec<InfiniteEquilibrium>, RootError> {
    if field.degenerate_kernel(tol).is_some() {
        return Err(RootError::DegenerateContinuum);
    }
    circle_zeros(&field.angular_form(), tol).map_err(|e| match e {
        RootError::IdenticallyZero => RootError::DegenerateContinuum,
        other => other,
    })
}
