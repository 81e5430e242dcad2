//! Dormand–Prince 5(4) for planar autonomous systems.

use serde::{Deserialize, Serialize};

use super::OracleError;

pub type State = [f64; 2];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth-order minus fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    pub atol: f64,
    pub rtol: f64,
    pub h_min: f64,
    pub max_steps: usize,
    /// Integration stops with an escape flag once `‖state‖` exceeds this.
    pub blowup_radius: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-10,
            h_min: 1e-14,
            max_steps: 2_000_000,
            blowup_radius: 1e6,
        }
    }
}

impl IntegratorOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            atol: tol,
            rtol: tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub min_step: f64,
    pub max_step: f64,
    /// Largest scaled local error estimate over accepted steps (≤ 1).
    pub max_error_ratio: f64,
    pub accepted: usize,
    pub rejected: usize,
}

impl Default for StepStats {
    fn default() -> Self {
        Self {
            min_step: f64::INFINITY,
            max_step: 0.0,
            max_error_ratio: 0.0,
            accepted: 0,
            rejected: 0,
        }
    }
}

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (a, k) in terms {
        out[0] += h * a * k[0];
        out[1] += h * a * k[1];
    }
    out
}

/// One Dormand–Prince step. Returns the fifth-order solution, its
/// derivative (first-same-as-last) and the embedded error vector.
pub fn dopri_step<F: Fn(&State) -> State>(rhs: &F, y: &State, k1: &State, h: f64) -> (State, State, State) {
    let k2 = rhs(&axpy(y, h, &[(A21, k1)]));
    let k3 = rhs(&axpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = rhs(&axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(&axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = rhs(&axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y5 = axpy(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = rhs(&y5);
    let err = [
        h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0]),
        h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1]),
    ];
    (y5, k7, err)
}

/// An accepted step, with enough data for cubic Hermite interpolation.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub t0: f64,
    pub y0: State,
    pub f0: State,
    pub t1: f64,
    pub y1: State,
    pub f1: State,
}

impl Step {
    pub fn interpolate(&self, t: f64) -> State {
        let h = self.t1 - self.t0;
        let s = (t - self.t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        [0, 1].map(|i| h00 * self.y0[i] + h10 * h * self.f0[i] + h01 * self.y1[i] + h11 * h * self.f1[i])
    }
}

/// Adaptive stepper with PI step-size control.
pub struct Stepper<F> {
    rhs: F,
    pub t: f64,
    pub y: State,
    f: State,
    h: f64,
    err_prev: f64,
    opts: IntegratorOptions,
    pub stats: StepStats,
}

impl<F: Fn(&State) -> State> Stepper<F> {
    pub fn new(rhs: F, t0: f64, y0: State, opts: IntegratorOptions) -> Self {
        let f = rhs(&y0);
        let scale = |i: usize| opts.atol + opts.rtol * y0[i].abs();
        let d0 = ((y0[0] / scale(0)).powi(2) + (y0[1] / scale(1)).powi(2)).sqrt() / 2f64.sqrt();
        let d1 = ((f[0] / scale(0)).powi(2) + (f[1] / scale(1)).powi(2)).sqrt() / 2f64.sqrt();
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        Self {
            rhs,
            t: t0,
            y: y0,
            f,
            h: h.max(opts.h_min * 10.0),
            err_prev: 1e-4,
            opts,
            stats: StepStats::default(),
        }
    }

    pub fn rhs(&self) -> &F {
        &self.rhs
    }

    /// Takes one accepted step of size at most `h_max`.
    pub fn step(&mut self, h_max: f64) -> Result<Step, OracleError> {
        loop {
            let h = self.h.min(h_max);
            if h < self.opts.h_min {
                return Err(OracleError::StepUnderflow { t: self.t, state: self.y });
            }
            let (y1, f1, e) = dopri_step(&self.rhs, &self.y, &self.f, h);
            let sc = |i: usize| self.opts.atol + self.opts.rtol * self.y[i].abs().max(y1[i].abs());
            let err = (((e[0] / sc(0)).powi(2) + (e[1] / sc(1)).powi(2)) / 2.0).sqrt();
            if !err.is_finite() || !y1[0].is_finite() || !y1[1].is_finite() {
                self.stats.rejected += 1;
                self.h = h * 0.2;
                continue;
            }
            if err <= 1.0 {
                let fac = if err == 0.0 {
                    5.0
                } else {
                    0.9 * err.powf(-0.7 / 5.0) * self.err_prev.powf(0.4 / 5.0)
                };
                self.err_prev = err.max(1e-4);
                let step = Step {
                    t0: self.t,
                    y0: self.y,
                    f0: self.f,
                    t1: self.t + h,
                    y1,
                    f1,
                };
                self.t += h;
                self.y = y1;
                self.f = f1;
                self.stats.accepted += 1;
                self.stats.min_step = self.stats.min_step.min(h);
                self.stats.max_step = self.stats.max_step.max(h);
                self.stats.max_error_ratio = self.stats.max_error_ratio.max(err);
                // Only grow from the full step, not from a clipped one.
                if h >= self.h * 0.999 || fac < 1.0 {
                    self.h = h * fac.clamp(0.2, 5.0);
                }
                return Ok(step);
            }
            self.stats.rejected += 1;
            self.h = h * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }

    pub fn max_steps(&self) -> usize {
        self.opts.max_steps
    }

    pub fn blowup_radius(&self) -> f64 {
        self.opts.blowup_radius
    }
}
