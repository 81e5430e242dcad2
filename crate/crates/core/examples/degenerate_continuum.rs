//! Fields with yQ1 = xQ2: every ray is invariant and the finite
//! equilibria fill curves p(θ) r^(n-1) = -λ.

use starnode::{assemble_portrait, StarField, Tolerances};

fn describe(label: &str, lambda: f64, p: [f64; 3]) {
    // Q = (x p, y p) with p = p0 x^2 + p1 xy + p2 y^2.
    let q1 = vec![p[0], p[1], p[2], 0.0];
    let q2 = vec![0.0, p[0], p[1], p[2]];
    let field = StarField::from_coeffs(lambda, q1, q2).unwrap();
    let portrait = assemble_portrait(&field, &Tolerances::default());
    let c = portrait.continuum.expect("degenerate field");
    println!("{label}: λ = {lambda:+}, p = {p:?}");
    println!("  case {:?}, full circle {}, origin only {}", c.degenerate_case, c.full_circle, c.origin_only);
    if let Some(r) = c.circle_radius {
        println!("  equilibrium circle of radius {r:.6}");
    }
    for arc in &c.arcs {
        println!("  arc {arc:?}");
    }
    println!("  kernel zeros: {:?}", c.kernel_zeros);
}

fn main() {
    describe("circle", 1.0, [-1.0, 0.0, -1.0]);
    describe("no finite equilibria", 1.0, [1.0, 0.0, 1.0]);
    describe("two arcs", 1.0, [-1.0, 0.0, 1.0]);
    describe("arcs in the first and third quadrants", 1.0, [0.0, -1.0, 0.0]);
    describe("reversed time", -1.0, [1.0, 0.0, 1.0]);
}
