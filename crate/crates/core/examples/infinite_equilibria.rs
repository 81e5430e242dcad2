//! Infinite equilibria of a few fields: the zeros of g(θ) on the circle,
//! with the chart each one is reported in and its multiplicity.

use starnode::roots::infinite_equilibria;
use starnode::{StarField, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let fields = [
        ("x' = x + x^2, y' = y + y^2", StarField::from_coeffs(1.0, vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0])),
        ("heteroclinic cubic", StarField::from_coeffs(1.0, vec![0.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0, -1.0])),
        ("double zeros: Q = (-y x^2, x^3)", StarField::from_coeffs(1.0, vec![0.0, -1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, 0.0])),
    ];
    for (name, field) in fields {
        let field = field.expect("valid field");
        println!("{name}");
        println!("  F(x, y) = {:?}", field.angular_form().coeffs());
        match infinite_equilibria(&field, &tol) {
            Ok(infs) if infs.is_empty() => println!("  no infinite equilibria"),
            Ok(infs) => {
                for e in infs {
                    println!(
                        "  θ = {:.6} ({:.2}°)  chart {:?}  multiplicity {}",
                        e.theta,
                        e.theta.to_degrees(),
                        e.chart,
                        e.multiplicity
                    );
                }
            }
            Err(e) => println!("  {e}"),
        }
    }
}
