//! Breaking the heteroclinic loop with (Q1 - εyⁿ, Q2 + εxⁿ) and following
//! the cycle that appears for ε > 0.

use starnode::report::sweep::run_sweep;
use starnode::{StarField, Tolerances};

fn main() {
    let base = StarField::from_coeffs(1.0, vec![0.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0, -1.0]).unwrap();
    let grid = [0.4, 0.2, 0.1, 0.05, 0.025, 0.0, -0.05];
    let s = run_sweep(&base, &grid, &Tolerances::default()).expect("base is heteroclinic");

    println!("{:>7}  {:>12}  {:>6}  {:>10}", "eps", "I(eps)", "cycle", "mean r");
    for row in &s.rows {
        let integral = row.criterion_integral.map_or("-".to_string(), |v| format!("{v:.5}"));
        let radius = row.cycle_mean_radius.map_or("-".to_string(), |v| format!("{v:.5}"));
        println!("{:>7}  {integral:>12}  {:>6}  {radius:>10}", row.eps, row.cycle_found);
        if let Some(note) = &row.note {
            println!("         {note}");
        }
    }
    println!(
        "all I < 0: {}, I decreasing in ε: {}, cycle for each ε > 0: {}",
        s.all_integrals_negative, s.integrals_decrease_with_eps, s.cycle_for_every_positive_eps
    );
}
