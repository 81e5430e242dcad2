//! Poincaré-disk drawings.
//!
//! The plane is squeezed into the unit disk by `r ↦ r / (1 + r)`, only for
//! display. Markers: filled for angular attractors, open for repellors,
//! half-filled for saddle-nodes; finite saddles are drawn as crosses.

use std::f64::consts::TAU;
use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equilibria::{AngularStability, TopoType};
use crate::oracle::{integrate_cartesian, IntegratorOptions, Trajectory};
use crate::poly::StarField;
use crate::portrait::GlobalPortrait;

const SIZE: f64 = 400.0;
const C: f64 = SIZE / 2.0;
const R: f64 = 180.0;

/// Disk coordinates of a plane point, in SVG pixels.
pub fn disk_point(x: f64, y: f64) -> (f64, f64) {
    let r = x.hypot(y);
    let s = if r == 0.0 { 0.0 } else { 1.0 / (1.0 + r) };
    (C + R * x * s, C - R * y * s)
}

fn boundary_point(theta: f64, scale: f64) -> (f64, f64) {
    (C + R * scale * theta.cos(), C - R * scale * theta.sin())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleOptions {
    pub count: usize,
    pub seed: u64,
    pub t_end: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            count: 16,
            seed: 0x5eed,
            t_end: 30.0,
            r_min: 0.1,
            r_max: 3.0,
        }
    }
}

/// Forward orbits from seeded random starts. Failed integrations are
/// skipped.
pub fn sample_trajectories(field: &StarField, opts: &SampleOptions) -> Vec<Trajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let io = IntegratorOptions::with_tol(1e-8);
    (0..opts.count)
        .filter_map(|_| {
            let th = rng.random_range(0.0..TAU);
            let r = opts.r_min + (opts.r_max - opts.r_min) * rng.random_range(0.0..1.0);
            integrate_cartesian(field, r * th.cos(), r * th.sin(), opts.t_end, &io).ok()
        })
        .collect()
}

fn marker(out: &mut String, (x, y): (f64, f64), kind: AngularStability, class: &str) {
    let rad = 5.0;
    match kind {
        AngularStability::Attracting => {
            let _ = writeln!(out, r#"<circle class="{class} attracting" cx="{x:.2}" cy="{y:.2}" r="{rad}" fill="black" stroke="black"/>"#);
        }
        AngularStability::Repelling => {
            let _ = writeln!(out, r#"<circle class="{class} repelling" cx="{x:.2}" cy="{y:.2}" r="{rad}" fill="white" stroke="black"/>"#);
        }
        AngularStability::SemiStable => {
            let _ = writeln!(out, r#"<circle class="{class} saddle-node" cx="{x:.2}" cy="{y:.2}" r="{rad}" fill="white" stroke="black"/>"#);
            let _ = writeln!(
                out,
                r#"<path class="{class} saddle-node-fill" d="M {:.2} {y:.2} A {rad} {rad} 0 0 1 {:.2} {y:.2} Z" fill="black"/>"#,
                x - rad,
                x + rad
            );
        }
    }
}

fn polyline(out: &mut String, class: &str, pts: impl Iterator<Item = (f64, f64)>, style: &str) {
    let mut d = String::new();
    for (x, y) in pts {
        let _ = write!(d, "{x:.2},{y:.2} ");
    }
    let _ = writeln!(out, r#"<polyline class="{class}" points="{}" fill="none" {style}/>"#, d.trim_end());
}

/// Renders the portrait as a standalone SVG document.
pub fn render(portrait: &GlobalPortrait, trajectories: &[Trajectory]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", portrait.verdict.as_str());
    let _ = writeln!(s, r#"<circle class="boundary" cx="{C}" cy="{C}" r="{R}" fill="none" stroke="black" stroke-width="1.5"/>"#);

    for rec in &portrait.infinite {
        let (x, y) = boundary_point(rec.equilibrium.theta, 1.0);
        let _ = writeln!(
            s,
            r#"<line class="invariant-ray" x1="{C}" y1="{C}" x2="{x:.2}" y2="{y:.2}" stroke="gray" stroke-width="0.8"/>"#
        );
    }

    for t in trajectories {
        polyline(
            &mut s,
            "trajectory",
            t.samples.iter().map(|p| disk_point(p.x, p.y)),
            r#"stroke="steelblue" stroke-width="0.8""#,
        );
    }

    if let Some(c) = &portrait.cycle_profile {
        let mut pts: Vec<(f64, f64)> = c
            .samples
            .iter()
            .map(|&[th, r]| disk_point(r * th.cos(), r * th.sin()))
            .collect();
        if let Some(&p0) = pts.first() {
            pts.push(p0);
        }
        polyline(&mut s, "limit-cycle", pts.into_iter(), r#"stroke="crimson" stroke-width="1.6""#);
    }

    if let Some(cont) = &portrait.continuum {
        let dotted = r#"stroke="black" stroke-width="1.2" stroke-dasharray="2,3""#;
        // The equator itself is a curve of equilibria.
        polyline(
            &mut s,
            "equilibrium-curve",
            (0..=360).map(|i| boundary_point(i as f64 * TAU / 360.0, 0.985)),
            dotted,
        );
        for arc in &cont.arcs {
            let steps = 200;
            let pts = (0..=steps).filter_map(|i| {
                let th = arc.theta_start + (arc.theta_end - arc.theta_start) * i as f64 / steps as f64;
                cont.radius_at(th).map(|r| disk_point(r * th.cos(), r * th.sin()))
            });
            polyline(&mut s, "equilibrium-curve", pts, dotted);
        }
    }

    for rec in &portrait.infinite {
        marker(&mut s, boundary_point(rec.equilibrium.theta, 1.0), rec.stability.angular, "infinite-equilibrium");
    }
    for e in &portrait.finite {
        let p = disk_point(e.x, e.y);
        match e.topo_type {
            TopoType::NodeAttractor => marker(&mut s, p, AngularStability::Attracting, "finite-equilibrium"),
            TopoType::NodeRepellor => marker(&mut s, p, AngularStability::Repelling, "finite-equilibrium"),
            TopoType::SaddleNode => marker(&mut s, p, AngularStability::SemiStable, "finite-equilibrium"),
            TopoType::Saddle => {
                let (x, y) = p;
                let _ = writeln!(
                    s,
                    r#"<path class="finite-equilibrium saddle" d="M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}" stroke="black" stroke-width="1.5"/>"#,
                    x - 5.0,
                    y - 5.0,
                    x + 5.0,
                    y + 5.0,
                    x - 5.0,
                    y + 5.0,
                    x + 5.0,
                    y - 5.0
                );
            }
        }
    }
    let _ = write!(s, r#"<circle class="origin" cx="{C}" cy="{C}" r="2.5" fill="black"/>"#);
    s.push_str("\n</svg>\n");
    s
}
