//! A heteroclinic loop through two saddle-nodes at infinity and two finite
//! saddles, and a check of the arc between them by direct integration.

use std::f64::consts::FRAC_PI_2;

use starnode::oracle::{cross_validate, CrossValidationOptions};
use starnode::{assemble_portrait, StarField, Tolerances};

fn main() {
    // Q = (-xy², x³ - y³), so F = x⁴: g vanishes only on the y axis.
    let field = StarField::from_coeffs(1.0, vec![0.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0, -1.0]).unwrap();
    let tol = Tolerances::default();
    let p = assemble_portrait(&field, &tol);
    println!("verdict: {}", p.verdict.as_str());
    if let Some(pc) = &p.polycycle {
        println!("polycycle: {:?}, attracting = {}", pc.kind, pc.attracting);
    }
    for e in &p.finite {
        println!("saddle at ({:+.6}, {:+.6}), r0 = {:.6}", e.x, e.y, e.r0);
    }

    // Along the invariant ray θ = π/2 the radius goes to r0 = 1.
    let r0 = p.finite.iter().find(|e| (e.theta0 - FRAC_PI_2).abs() < 1e-9).map(|e| e.r0);
    println!("r0 on θ = π/2: {r0:?}");

    let v = cross_validate(&field, &p, &CrossValidationOptions::default(), &tol);
    println!(
        "cross-validation: {} trajectories, {} contradictions, cone invariance {}",
        v.checks.len(),
        v.contradictions,
        v.cone_invariance_ok
    );
}
