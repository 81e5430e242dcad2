//! Trajectory-level cross-check of a symbolic portrait.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    chart_rhs, chart_to_polar, integrate_cartesian, locate_cycle, polar_to_chart, CycleProfile, CycleSearchOptions,
    IntegratorOptions, Stepper, Trajectory,
};
use crate::config::Tolerances;
use crate::equilibria::{RadialStability, TopoType};
use crate::poly::StarField;
use crate::portrait::{GlobalPortrait, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossValidationOptions {
    pub trajectories: usize,
    pub t_end: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub seed: u64,
    pub integrator: IntegratorOptions,
}

impl Default for CrossValidationOptions {
    fn default() -> Self {
        Self {
            trajectories: 8,
            t_end: 60.0,
            r_min: 0.2,
            r_max: 2.0,
            seed: 0x5eed,
            integrator: IntegratorOptions::with_tol(1e-10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// Escaped; `limit_theta` is the equator point reached by the chart
    /// continuation, when it settled.
    Infinity { limit_theta: Option<f64> },
    Origin,
    Equilibrium { index: usize },
    NearCycle,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryCheck {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub outcome: Outcome,
    pub cone_invariant: bool,
    pub contradiction: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub seed: u64,
    pub checks: Vec<TrajectoryCheck>,
    pub cone_invariance_ok: bool,
    pub contradictions: usize,
    pub undetermined: usize,
    pub cycle: Option<CycleProfile>,
    pub errors: Vec<String>,
}

impl CrossValidation {
    pub fn agrees(&self) -> bool {
        self.cone_invariance_ok && self.contradictions == 0 && self.errors.is_empty()
    }
}

/// Follows an escaped orbit on the equator through the charts until the
/// angle settles. Returns the limit angle or `None`.
fn chart_limit(field: &StarField, theta: f64, r: f64) -> Option<f64> {
    let (mut chart, mut u, mut v) = polar_to_chart(theta, r);
    let opts = IntegratorOptions::with_tol(1e-10);
    let mut last = theta;
    for _ in 0..400 {
        let mut st = Stepper::new(chart_rhs(field, chart), 0.0, [u, v], opts);
        while st.t < 1.0 {
            if st.step(1.0 - st.t).is_err() {
                return None;
            }
            if st.y[0].abs() > 2.0 {
                break;
            }
        }
        u = st.y[0];
        v = st.y[1].max(0.0);
        // Back in the finite plane: not an escape to infinity after all.
        if v > 1.0 {
            return None;
        }
        let (t, rr) = chart_to_polar(chart, u, v);
        let moved = (t - last).abs();
        last = t;
        if moved < 1e-10 {
            return Some(t);
        }
        if u.abs() > 1.0 {
            let (c, uu, vv) = polar_to_chart(t, if v > 0.0 { rr } else { 1e300 });
            chart = c;
            u = uu;
            v = if v > 0.0 { vv } else { 0.0 };
        }
    }
    // Slow (algebraic) approach to a multiple root: report the last angle.
    Some(last)
}

fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Integrates random orbits and checks them against the portrait.
///
/// Cone invariance: the side of every invariant diameter never changes.
/// Contradictions are outcomes the verdict rules out, e.g. convergence to a
/// repelling node, escape where every point at infinity repels radially,
/// or a bounded non-convergent orbit under a global repellor.
pub fn cross_validate(field: &StarField, portrait: &GlobalPortrait, opts: &CrossValidationOptions, tol: &Tolerances) -> CrossValidation {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let lambda = field.lambda();
    let diameters: Vec<f64> = portrait.infinite.iter().map(|e| e.equilibrium.theta).collect();
    let mut errors = Vec::new();

    let cycle = if portrait.verdict == Verdict::LimitCycle {
        match portrait.cycle_profile.clone() {
            Some(c) => Some(c),
            None => match locate_cycle(field, &CycleSearchOptions::default()) {
                Ok(c) => Some(c),
                Err(e) => {
                    errors.push(format!("limit cycle verdict but no cycle located: {e}"));
                    None
                }
            },
        }
    } else {
        None
    };

    let all_repel_at_infinity = !portrait.infinite.is_empty()
        && portrait.infinite.iter().all(|e| e.stability.radial == RadialStability::Repelling);

    let mut checks = Vec::with_capacity(opts.trajectories);
    for _ in 0..opts.trajectories {
        let theta = loop {
            let t = rng.random_range(0.0..TAU);
            if diameters.iter().all(|&d| (t - d).sin().abs() > 1e-3) {
                break t;
            }
        };
        let r0 = opts.r_min + (opts.r_max - opts.r_min) * rng.random_range(0.0..1.0);
        let start = [r0 * theta.cos(), r0 * theta.sin()];
        let tr: Trajectory = match integrate_cartesian(field, start[0], start[1], opts.t_end, &opts.integrator) {
            Ok(t) => t,
            Err(e) => {
                errors.push(format!("integration from {start:?} failed: {e}"));
                continue;
            }
        };

        let cone_invariant = diameters.iter().all(|&d| {
            let (sd, cd) = d.sin_cos();
            let side = |x: f64, y: f64| (y * cd - x * sd) / x.hypot(y).max(f64::MIN_POSITIVE);
            let s0 = side(start[0], start[1]).signum();
            tr.samples.iter().all(|s| s0 * side(s.x, s.y) > -1e-9)
        });

        let last = tr.last();
        let r_end = last.x.hypot(last.y);
        let th_end = last.y.atan2(last.x).rem_euclid(TAU);
        let outcome = if tr.escaped() {
            Outcome::Infinity {
                limit_theta: chart_limit(field, th_end, r_end),
            }
        } else if r_end < 1e-6 {
            Outcome::Origin
        } else if let Some(i) = portrait
            .finite
            .iter()
            .position(|e| (e.x - last.x).hypot(e.y - last.y) < 1e-3 * e.r0.max(1.0))
        {
            Outcome::Equilibrium { index: i }
        } else if cycle
            .as_ref()
            .is_some_and(|c| (r_end - c.radius_at(th_end)).abs() < 1e-3 * c.mean_radius.max(1.0))
        {
            Outcome::NearCycle
        } else if let Some(c) = portrait.continuum.as_ref().and_then(|c| c.radius_at(th_end)) {
            if (r_end - c).abs() < 1e-3 * c.max(1.0) {
                Outcome::Equilibrium { index: usize::MAX }
            } else {
                Outcome::Undetermined
            }
        } else {
            Outcome::Undetermined
        };

        let ftol = field.f_zero_threshold(tol);
        let contradiction = match outcome {
            Outcome::Origin if lambda > 0.0 => Some("converged to the origin, which repels for λ > 0".to_string()),
            Outcome::Equilibrium { index } if index != usize::MAX => {
                let e = &portrait.finite[index];
                (e.topo_type == TopoType::NodeRepellor).then(|| format!("converged to the repelling node at ({:.4}, {:.4})", e.x, e.y))
            }
            Outcome::Infinity { limit_theta } => {
                if all_repel_at_infinity {
                    Some("escaped although every infinite equilibrium repels radially".into())
                } else if let Some(t) = limit_theta {
                    portrait
                        .infinite
                        .iter()
                        .min_by(|a, b| angle_dist(a.equilibrium.theta, t).total_cmp(&angle_dist(b.equilibrium.theta, t)))
                        .filter(|e| angle_dist(e.equilibrium.theta, t) < 1e-6 && e.stability.radial == RadialStability::Repelling && e.f_value.abs() > ftol)
                        .map(|e| format!("escaped toward θ = {:.6}, which repels radially", e.equilibrium.theta))
                } else {
                    None
                }
            }
            _ => None,
        };
        let contradiction = contradiction.or_else(|| match (portrait.verdict, outcome) {
            (Verdict::GlobalAttractor, Outcome::Infinity { .. }) => Some("escaped under a global attractor".into()),
            (Verdict::GlobalAttractor, Outcome::Equilibrium { .. }) => Some("stopped at a finite equilibrium under a global attractor".into()),
            (Verdict::GlobalRepellor, Outcome::Equilibrium { .. }) => Some("stopped at a finite equilibrium under a global repellor".into()),
            (Verdict::GlobalRepellor, Outcome::Undetermined) if r_end < r0 => {
                Some("bounded orbit drifting inward under a global repellor".into())
            }
            (Verdict::LimitCycle, Outcome::Infinity { .. }) if lambda > 0.0 => Some("escaped although the cycle attracts".into()),
            (Verdict::LimitCycle, Outcome::Origin) if lambda > 0.0 => Some("reached the origin although it repels".into()),
            (Verdict::LimitCycle, Outcome::Infinity { .. }) => {
                let inside = cycle.as_ref().is_some_and(|c| r0 < c.radius_at(theta));
                inside.then(|| "escaped from inside a repelling cycle".into())
            }
            (Verdict::LimitCycle, Outcome::Origin) => {
                let outside = cycle.as_ref().is_some_and(|c| r0 > c.radius_at(theta));
                outside.then(|| "reached the origin from outside a repelling cycle".into())
            }
            (Verdict::Polycycle | Verdict::HeteroclinicCycle, Outcome::Infinity { .. }) if lambda > 0.0 => {
                Some("escaped although the polycycle attracts".into())
            }
            _ => None,
        });
        checks.push(TrajectoryCheck {
            start,
            end: [last.x, last.y],
            outcome,
            cone_invariant,
            contradiction,
        });
    }

    CrossValidation {
        seed: opts.seed,
        cone_invariance_ok: checks.iter().all(|c| c.cone_invariant),
        contradictions: checks.iter().filter(|c| c.contradiction.is_some()).count(),
        undetermined: checks.iter().filter(|c| c.outcome == Outcome::Undetermined).count(),
        checks,
        cycle,
        errors,
    }
}
