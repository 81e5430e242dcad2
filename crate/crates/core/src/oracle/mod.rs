//! Numerical oracle: trajectories of the Cartesian and compactified
//! systems, Poincaré return maps, cycle location and the rotational
//! perturbation `(−yⁿ, xⁿ)` that breaks a heteroclinic cycle.
//!
//! Nothing here reads the symbolic verdict except [`cross_validate`], which
//! compares the two.

pub mod integrator;
mod validate;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{FieldError, HomogeneousPoly, StarField};
use crate::roots::Chart;

pub use integrator::{IntegratorOptions, State, StepStats, Stepper};
pub use validate::{cross_validate, CrossValidation, CrossValidationOptions, Outcome, TrajectoryCheck};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("step size underflow at t = {t} (state {state:?})")]
    StepUnderflow { t: f64, state: State },
    #[error("step budget exhausted at t = {t}")]
    StepBudget { t: f64 },
    #[error("no return to the section before t = {t_max}")]
    NoReturn { t_max: f64 },
    #[error("trajectory escaped to infinity before returning")]
    Escaped,
    #[error("trajectory collapsed onto the origin before returning")]
    Collapsed,
    #[error("no sign change of the return-map displacement was found")]
    NotFound,
    #[error("chart initial condition needs v0 >= 0, got {0}")]
    NegativeV(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryStatus {
    Completed,
    Escaped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub step_stats: StepStats,
    pub status: TrajectoryStatus,
}

impl Trajectory {
    pub fn last(&self) -> Sample {
        *self.samples.last().expect("trajectory has at least the initial sample")
    }

    pub fn escaped(&self) -> bool {
        self.status == TrajectoryStatus::Escaped
    }
}

fn norm(y: &State) -> f64 {
    y[0].hypot(y[1])
}

fn run<F: Fn(&State) -> State>(rhs: F, y0: State, t_end: f64, opts: &IntegratorOptions) -> Result<Trajectory, OracleError> {
    let mut st = Stepper::new(rhs, 0.0, y0, *opts);
    let mut samples = vec![Sample { t: 0.0, x: y0[0], y: y0[1] }];
    let big = opts.blowup_radius;
    let mut status = TrajectoryStatus::Completed;
    while st.t < t_end {
        if st.stats.accepted >= st.max_steps() {
            return Err(OracleError::StepBudget { t: st.t });
        }
        match st.step(t_end - st.t) {
            Ok(_) => {}
            // Finite-time blow-up shows up as a collapsing step size far
            // from the starting radius.
            Err(OracleError::StepUnderflow { .. }) if norm(&st.y) > 1e2 * norm(&y0).max(1.0) => {
                status = TrajectoryStatus::Escaped;
                break;
            }
            Err(e) => return Err(e),
        }
        samples.push(Sample { t: st.t, x: st.y[0], y: st.y[1] });
        if norm(&st.y) > big {
            status = TrajectoryStatus::Escaped;
            break;
        }
    }
    Ok(Trajectory {
        samples,
        step_stats: st.stats,
        status,
    })
}

/// Integrates `x' = λx + Q1`, `y' = λy + Q2` from `(x0, y0)` up to `t_end`.
pub fn integrate_cartesian(
    field: &StarField,
    x0: f64,
    y0: f64,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory, OracleError> {
    run(|s: &State| field.eval(s[0], s[1]), [x0, y0], t_end, opts)
}

/// Right-hand side of the compactified system in one of the four charts.
///
/// In `U1` = `{x > 0}` with `x = 1/v`, `y = u/v` and time rescaled by
/// `vⁿ⁻¹`: `u' = F(u)`, `v' = −λvⁿ − v Q1(1, u)`. `U2` swaps the roles of
/// `x` and `y`. `V1` and `V2` keep `v = 1/|x|` (resp. `1/|y|`) positive,
/// so the `u` equation and the `Q` term pick up the factor `(−1)ⁿ⁻¹`
/// while the `λ` term does not.
pub fn chart_rhs(field: &StarField, chart: Chart) -> impl Fn(&State) -> State {
    let n = field.degree() as i32;
    let lambda = field.lambda();
    let (uu, q) = match chart {
        Chart::U1 | Chart::V1 => (field.u1_polynomial(), field.q1().at_x_one()),
        Chart::U2 | Chart::V2 => (field.u2_polynomial(), field.q2().at_y_one()),
    };
    let sign = match chart {
        Chart::U1 | Chart::U2 => 1.0,
        Chart::V1 | Chart::V2 => (-1f64).powi(n - 1),
    };
    move |s: &State| {
        let (u, v) = (s[0], s[1]);
        [sign * uu.eval(u), -lambda * v.powi(n) - sign * v * q.eval(u)]
    }
}

/// Integrates the chart system; samples report `(u, v)` in the `x`/`y`
/// slots.
pub fn integrate_chart(
    field: &StarField,
    chart: Chart,
    u0: f64,
    v0: f64,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory, OracleError> {
    if v0 < 0.0 {
        return Err(OracleError::NegativeV(v0));
    }
    run(chart_rhs(field, chart), [u0, v0], t_end, opts)
}

/// Polar angle and radius of a chart point with `v > 0`.
pub fn chart_to_polar(chart: Chart, u: f64, v: f64) -> (f64, f64) {
    let h = (1.0 + u * u).sqrt();
    let r = if v > 0.0 { h / v } else { f64::INFINITY };
    let theta = match chart {
        Chart::U1 => u.atan2(1.0),
        Chart::V1 => (-u).atan2(-1.0),
        Chart::U2 => 1f64.atan2(u),
        Chart::V2 => (-1f64).atan2(-u),
    };
    (theta.rem_euclid(TAU), r)
}

/// The chart in which a direction is best conditioned, and its
/// coordinates `(u, v)` for the point at angle `theta` and radius `r`.
pub fn polar_to_chart(theta: f64, r: f64) -> (Chart, f64, f64) {
    let (s, c) = theta.sin_cos();
    let (x, y) = (r * c, r * s);
    if c.abs() >= s.abs() {
        let chart = if c > 0.0 { Chart::U1 } else { Chart::V1 };
        (chart, y / x, 1.0 / x.abs())
    } else {
        let chart = if s > 0.0 { Chart::U2 } else { Chart::V2 };
        (chart, x / y, 1.0 / y.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnOptions {
    pub integrator: IntegratorOptions,
    pub t_max: f64,
    pub collapse_ratio: f64,
}

impl Default for ReturnOptions {
    fn default() -> Self {
        Self {
            integrator: IntegratorOptions::default(),
            t_max: 1e4,
            collapse_ratio: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnMapResult {
    pub section_theta: f64,
    pub r_in: f64,
    pub r_out: f64,
    pub crossings: usize,
    pub return_time: f64,
}

fn wrap_pi(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Follows the orbit through `(r0 cosθs, r0 sinθs)` until its unwrapped
/// polar angle has advanced by a full turn in the direction of rotation.
pub fn return_map(field: &StarField, section_theta: f64, r0: f64, opts: &ReturnOptions) -> Result<ReturnMapResult, OracleError> {
    let dir = if field.angular_coeff(section_theta) >= 0.0 { 1.0 } else { -1.0 };
    let target = section_theta + dir * TAU;
    let (s, c) = section_theta.sin_cos();
    let rhs = |y: &State| field.eval(y[0], y[1]);
    let mut st = Stepper::new(rhs, 0.0, [r0 * c, r0 * s], opts.integrator);
    let mut phi = section_theta;
    loop {
        if st.t > opts.t_max {
            return Err(OracleError::NoReturn { t_max: opts.t_max });
        }
        if st.stats.accepted >= st.max_steps() {
            return Err(OracleError::StepBudget { t: st.t });
        }
        let step = match st.step(f64::INFINITY) {
            Ok(s) => s,
            Err(OracleError::StepUnderflow { state, .. }) if norm(&state) > 1e2 * r0.max(1.0) => {
                return Err(OracleError::Escaped)
            }
            Err(e) => return Err(e),
        };
        let a0 = step.y0[1].atan2(step.y0[0]);
        let phi1 = phi + wrap_pi(step.y1[1].atan2(step.y1[0]) - a0);
        let r1 = norm(&step.y1);
        if r1 > opts.integrator.blowup_radius {
            return Err(OracleError::Escaped);
        }
        if r1 < opts.collapse_ratio * r0 {
            return Err(OracleError::Collapsed);
        }
        if (phi1 - target) * dir >= 0.0 {
            // Re-step from the start of the bracketing step with a shorter
            // step size until the angle hits the section.
            let angle_at = |h: f64| {
                let (y, _, _) = integrator::dopri_step(st.rhs(), &step.y0, &step.f0, h);
                (phi + wrap_pi(y[1].atan2(y[0]) - a0), y)
            };
            let (mut lo, mut hi) = (0.0, step.t1 - step.t0);
            let mut y_hit = step.y1;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let (a, y) = angle_at(mid);
                y_hit = y;
                if (a - target) * dir >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-15 * (1.0 + step.t0.abs()) {
                    break;
                }
            }
            return Ok(ReturnMapResult {
                section_theta,
                r_in: r0,
                r_out: norm(&y_hit),
                crossings: 1,
                return_time: step.t0 + 0.5 * (lo + hi),
            });
        }
        phi = phi1;
    }
}

/// A located periodic orbit: the fixed point of the return map on the
/// section, a sampled `(θ, r)` profile and its hyperbolicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleProfile {
    pub section_theta: f64,
    pub fixed_point_radius: f64,
    pub residual: f64,
    pub return_derivative: f64,
    pub hyperbolic: bool,
    pub period: f64,
    pub mean_radius: f64,
    pub samples: Vec<[f64; 2]>,
}

impl CycleProfile {
    /// Radius of the cycle at polar angle `theta`, by linear interpolation.
    pub fn radius_at(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(TAU);
        let k = self.samples.len();
        for i in 0..k {
            let (a, b) = (self.samples[i], self.samples[(i + 1) % k]);
            let mut db = (b[0] - a[0]).rem_euclid(TAU);
            if db == 0.0 {
                db = TAU;
            }
            let dt = (t - a[0]).rem_euclid(TAU);
            if dt <= db {
                return a[1] + (b[1] - a[1]) * dt / db;
            }
        }
        self.mean_radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSearchOptions {
    pub returns: ReturnOptions,
    pub section_theta: f64,
    /// Stop once `|P(r) − r|` is below this.
    pub fixed_point_tol: f64,
    pub max_doublings: i32,
    pub profile_points: usize,
}

impl Default for CycleSearchOptions {
    fn default() -> Self {
        Self {
            returns: ReturnOptions::default(),
            section_theta: 0.0,
            fixed_point_tol: 1e-11,
            max_doublings: 30,
            profile_points: 256,
        }
    }
}

/// Displacement `P(r) − r`, with escape counted as positive and collapse
/// as negative.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Displacement {
    Value(f64),
    Escaped,
    Collapsed,
}

impl Displacement {
    fn sign(&self) -> f64 {
        match self {
            Self::Value(d) => d.signum(),
            Self::Escaped => 1.0,
            Self::Collapsed => -1.0,
        }
    }
}

fn displacement(field: &StarField, r: f64, opts: &CycleSearchOptions) -> Result<Displacement, OracleError> {
    match return_map(field, opts.section_theta, r, &opts.returns) {
        Ok(m) => Ok(Displacement::Value(m.r_out - r)),
        Err(OracleError::Escaped) => Ok(Displacement::Escaped),
        Err(OracleError::Collapsed) | Err(OracleError::NoReturn { .. }) => Ok(Displacement::Collapsed),
        Err(e) => Err(e),
    }
}

/// Finds the fixed point of the return map on the section by a geometric
/// bracket search from `r = 1` followed by Illinois refinement.
///
/// For `λ < 0` the cycle repels and the forward map can expand by orders of
/// magnitude, so the search runs on the time-reversed field `(−λ, −Q)`,
/// which has the same closed orbit; the reported derivative is inverted.
pub fn locate_cycle(field: &StarField, opts: &CycleSearchOptions) -> Result<CycleProfile, OracleError> {
    if field.lambda() > 0.0 {
        return locate_forward(field, opts);
    }
    let reversed = StarField::new(-field.lambda(), field.q1().scale(-1.0), field.q2().scale(-1.0))
        .expect("negating a valid field keeps it valid");
    let mut c = locate_forward(&reversed, opts)?;
    c.return_derivative = 1.0 / c.return_derivative;
    c.residual = -c.residual;
    Ok(c)
}

fn locate_forward(field: &StarField, opts: &CycleSearchOptions) -> Result<CycleProfile, OracleError> {
    let mut evals: Vec<(f64, Displacement)> = Vec::new();
    let mut bracket = None;
    'search: for k in 0..=opts.max_doublings {
        for e in if k == 0 { vec![0] } else { vec![k, -k] } {
            let r = 2f64.powi(e);
            let d = displacement(field, r, opts)?;
            if let Displacement::Value(v) = d {
                if v.abs() < opts.fixed_point_tol {
                    bracket = Some(((r, d), (r, d)));
                    break 'search;
                }
            }
            evals.push((r, d));
            evals.sort_by(|a, b| a.0.total_cmp(&b.0));
            if let Some(w) = evals.windows(2).find(|w| w[0].1.sign() != w[1].1.sign()) {
                bracket = Some((w[0], w[1]));
                break 'search;
            }
        }
    }
    let ((mut a, mut da), (mut b, mut db)) = bracket.ok_or(OracleError::NotFound)?;
    let mut side = 0i8;
    let mut r_star = a;
    for _ in 0..300 {
        if a == b {
            break;
        }
        let m = match (da, db) {
            (Displacement::Value(fa), Displacement::Value(fb)) => {
                let m = (a * fb - b * fa) / (fb - fa);
                if m > a && m < b {
                    m
                } else {
                    0.5 * (a + b)
                }
            }
            _ => (a * b).sqrt(),
        };
        let dm = displacement(field, m, opts)?;
        r_star = m;
        if let Displacement::Value(v) = dm {
            if v.abs() < opts.fixed_point_tol || (b - a) < 1e-14 * b {
                break;
            }
        }
        if dm.sign() == da.sign() {
            a = m;
            da = dm;
            if side == -1 {
                if let Displacement::Value(v) = db {
                    db = Displacement::Value(v / 2.0);
                }
            }
            side = -1;
        } else {
            b = m;
            db = dm;
            if side == 1 {
                if let Displacement::Value(v) = da {
                    da = Displacement::Value(v / 2.0);
                }
            }
            side = 1;
        }
        r_star = 0.5 * (a + b);
    }
    cycle_profile(field, r_star, opts)
}

fn cycle_profile(field: &StarField, r_star: f64, opts: &CycleSearchOptions) -> Result<CycleProfile, OracleError> {
    let at = return_map(field, opts.section_theta, r_star, &opts.returns)?;
    let h = 1e-5 * r_star;
    let plus = return_map(field, opts.section_theta, r_star + h, &opts.returns)?;
    let minus = return_map(field, opts.section_theta, r_star - h, &opts.returns)?;
    let deriv = (plus.r_out - minus.r_out) / (2.0 * h);

    let (s, c) = opts.section_theta.sin_cos();
    let tr = integrate_cartesian(field, r_star * c, r_star * s, at.return_time, &opts.returns.integrator)?;
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(tr.samples.len());
    let mut phi = opts.section_theta;
    let mut prev = tr.samples[0];
    for smp in &tr.samples {
        phi += wrap_pi(smp.y.atan2(smp.x) - prev.y.atan2(prev.x));
        prev = *smp;
        pts.push([phi, smp.x.hypot(smp.y)]);
    }
    // Mean over the angle, trapezoidal in the unwrapped angle.
    let span = (pts[pts.len() - 1][0] - pts[0][0]).abs();
    let mean = pts
        .windows(2)
        .map(|w| 0.5 * (w[0][1] + w[1][1]) * (w[1][0] - w[0][0]).abs())
        .sum::<f64>()
        / span;
    let stride = (pts.len() / opts.profile_points.max(1)).max(1);
    let mut samples: Vec<[f64; 2]> = pts
        .iter()
        .step_by(stride)
        .map(|p| [p[0].rem_euclid(TAU), p[1]])
        .collect();
    samples.sort_by(|a, b| a[0].total_cmp(&b[0]));
    samples.dedup_by(|a, b| a[0] == b[0]);
    Ok(CycleProfile {
        section_theta: opts.section_theta,
        fixed_point_radius: r_star,
        residual: at.r_out - r_star,
        return_derivative: deriv,
        hyperbolic: (deriv - 1.0).abs() > 1e-3,
        period: at.return_time,
        mean_radius: mean,
        samples,
    })
}

/// `(Q1 − ε yⁿ, Q2 + ε xⁿ)` with the same `λ`.
pub fn perturbed_field(field: &StarField, eps: f64) -> Result<StarField, FieldError> {
    field.perturbed(eps)
}

/// Checks coefficient-wise that the perturbation adds
/// `ε (xⁿ⁺¹ + yⁿ⁺¹)` to `x Q2 − y Q1` and `ε (xⁿ y − x yⁿ)` to
/// `x Q1 + y Q2`.
pub fn perturbation_identity_holds(field: &StarField, eps: f64) -> bool {
    let Ok(p) = perturbed_field(field, eps) else {
        return false;
    };
    let n = field.degree();
    let close = |a: &HomogeneousPoly, b: &HomogeneousPoly| {
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|(x, y)| (x - y).abs() <= 1e-14 * (1.0 + x.abs().max(y.abs())))
    };
    let mut dang = HomogeneousPoly::zero(n + 1);
    let mut drad = HomogeneousPoly::zero(n + 1);
    dang = dang
        .add(&HomogeneousPoly::monomial(n + 1, 0, eps))
        .add(&HomogeneousPoly::monomial(n + 1, n + 1, eps));
    drad = drad
        .add(&HomogeneousPoly::monomial(n + 1, 1, eps))
        .sub(&HomogeneousPoly::monomial(n + 1, n, eps));
    close(&p.angular_form(), &field.angular_form().add(&dang)) && close(&p.radial_form(), &field.radial_form().add(&drad))
}
