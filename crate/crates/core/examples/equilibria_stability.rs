//! Finite equilibria on the invariant rays and their stability, next to
//! the radial and angular stability of the points at infinity.

use starnode::{assemble_portrait, StarField, Tolerances};

fn main() {
    let field = StarField::from_coeffs(1.0, vec![0.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0, -1.0]).unwrap();
    let p = assemble_portrait(&field, &Tolerances::default());

    println!("verdict: {}", p.verdict.as_str());
    println!("at infinity:");
    for rec in &p.infinite {
        println!(
            "  θ = {:>8.5}  f = {:>+8.4}  {:?}",
            rec.equilibrium.theta, rec.f_value, rec.stability
        );
    }
    println!("finite:");
    for e in &p.finite {
        println!(
            "  ({:+.4}, {:+.4})  radial eig {:+.3}  angular eig {:+.3}  {:?} {:?}",
            e.x, e.y, e.jac_eigen_radial, e.jac_eigen_angular, e.topo_type, e.stability
        );
    }
    println!("cones:");
    for c in &p.cones {
        let (from, to) = c.flow_pair();
        println!(
            "  ({:.4}, {:.4})  g {:+}  {from:?} -> {to:?}  case {:?}",
            c.theta1, c.theta2, c.g_sign_inside, c.case_tag
        );
    }
}
