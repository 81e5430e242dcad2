//! Render the compactified portrait of the perturbed heteroclinic field
//! to an SVG file: `cargo run --example poincare_disk_svg -- out.svg`.

use starnode::oracle::{locate_cycle, perturbed_field, CycleSearchOptions};
use starnode::report::svg::{render, sample_trajectories, SampleOptions};
use starnode::{assemble_portrait, StarField, Tolerances};

fn main() -> std::io::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "portrait.svg".into());
    let base = StarField::from_coeffs(1.0, vec![0.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0, -1.0]).unwrap();
    let field = perturbed_field(&base, 0.1).unwrap();

    let mut portrait = assemble_portrait(&field, &Tolerances::default());
    if portrait.verdict.has_periodic_orbit() {
        portrait.cycle_profile = locate_cycle(&field, &CycleSearchOptions::default()).ok();
    }
    let trajectories = sample_trajectories(&field, &SampleOptions::default());
    std::fs::write(&path, render(&portrait, &trajectories))?;
    println!("{} ({} trajectories) -> {path}", portrait.verdict.as_str(), trajectories.len());
    Ok(())
}
