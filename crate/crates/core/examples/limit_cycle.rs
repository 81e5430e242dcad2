//! The criterion integral and the located cycle for
//! x' = λx - (x + y)(x² + y²), y' = λy + (x - y)(x² + y²).

use starnode::oracle::{locate_cycle, CycleSearchOptions};
use starnode::{assemble_portrait, StarField, Tolerances};

fn main() {
    // f = -1 and g = 1, so I = -2π and the cycle is r = √λ when λ > 0.
    let q1 = vec![-1.0, -1.0, -1.0, -1.0];
    let q2 = vec![1.0, -1.0, 1.0, -1.0];
    for lambda in [1.0, 4.0, -1.0] {
        let field = StarField::from_coeffs(lambda, q1.clone(), q2.clone()).unwrap();
        let p = assemble_portrait(&field, &Tolerances::default());
        let c = p.cycle.as_ref().expect("no zeros of g");
        println!(
            "λ = {lambda:+}: I = {:.9} (±{:.1e}), λI = {:+.4}, verdict {}",
            c.integral,
            c.error_estimate,
            c.lambda_times_integral,
            p.verdict.as_str()
        );
        if !p.verdict.has_periodic_orbit() {
            continue;
        }
        match locate_cycle(&field, &CycleSearchOptions::default()) {
            Ok(cyc) => println!(
                "  cycle through r = {:.9} at θ = {:.3}, P'(r) = {:.3e}, period {:.4}",
                cyc.fixed_point_radius, cyc.section_theta, cyc.return_derivative, cyc.period
            ),
            Err(e) => println!("  no cycle located: {e}"),
        }
    }
}
