//! Instantiate canonical forms, compare their tabulated infinite
//! equilibria with what the engine finds, and audit a small grid.

use starnode::canonical::{consistency_check, CanonicalSpec, FormId, FormParams};
use starnode::report::audit::audit;
use starnode::Tolerances;

fn main() {
    let tol = Tolerances::default();
    let spec = CanonicalSpec::new(
        FormId::IX,
        FormParams {
            p1: 0.5,
            p2: -1.0,
            p3: 2.0,
            ..Default::default()
        },
        1.0,
    );
    let rep = consistency_check(&spec, &tol);
    println!("form IX at (0.5, -1, 2): engine verdict {:?}", rep.engine_verdict);
    for c in &rep.checks {
        println!("  {:<26} {:?}", c.property, c.status);
    }

    for degree in [3, 2] {
        let summary = audit(degree, &[-1.0, 0.5, 2.0], &tol);
        println!("degree {degree}:");
        for f in &summary.forms {
            let cells: Vec<String> = f
                .properties
                .iter()
                .map(|(k, t)| format!("{k} {}/{}", t.matches, t.total()))
                .collect();
            println!("  {:>4}  {} points  {}", f.form.as_str(), f.points, cells.join(", "));
        }
        println!("  {} flagged reports", summary.flagged.len());
    }
}
