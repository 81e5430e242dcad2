//! Saddle-node perturbation sweep: `Q_ε = (Q1 − ε yⁿ, Q2 + ε xⁿ)` applied
//! to a field with a heteroclinic cycle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Tolerances;
use crate::oracle::{locate_cycle, perturbed_field, CycleSearchOptions};
use crate::poly::StarField;
use crate::portrait::{assemble_portrait, cycle_integral, Verdict};
use crate::roots::infinite_equilibria;

pub const DEFAULT_EPS_GRID: &str = "0.2,0.1,0.05,0.025";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("base field verdict is {0:?}, the sweep needs heteroclinic_cycle")]
    NotHeteroclinic(Verdict),
    #[error("bad ε grid {0:?}")]
    BadGrid(String),
}

pub fn parse_eps_grid(spec: &str) -> Result<Vec<f64>, SweepError> {
    let grid: Result<Vec<f64>, _> = spec.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match grid {
        Ok(g) if !g.is_empty() && g.iter().all(|e| e.is_finite()) => Ok(g),
        _ => Err(SweepError::BadGrid(spec.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub infinite_equilibria: Option<usize>,
    /// `∫ f/|g|` for the perturbed field; absent when `g` has zeros.
    pub criterion_integral: Option<f64>,
    pub criterion_error: Option<f64>,
    pub cycle_found: bool,
    pub cycle_mean_radius: Option<f64>,
    pub cycle_fixed_point_radius: Option<f64>,
    pub return_derivative: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub base_verdict: Verdict,
    pub tolerances: Tolerances,
    pub rows: Vec<SweepRow>,
    /// Over rows with a criterion value.
    pub all_integrals_negative: bool,
    /// Sorting rows by decreasing `ε`, the criterion decreases strictly.
    pub integrals_decrease_with_eps: bool,
    pub cycle_for_every_positive_eps: bool,
}

fn row(base: &StarField, eps: f64, tol: &Tolerances) -> SweepRow {
    let mut r = SweepRow {
        eps,
        infinite_equilibria: None,
        criterion_integral: None,
        criterion_error: None,
        cycle_found: false,
        cycle_mean_radius: None,
        cycle_fixed_point_radius: None,
        return_derivative: None,
        note: None,
    };
    let field = match perturbed_field(base, eps) {
        Ok(f) => f,
        Err(e) => {
            r.note = Some(e.to_string());
            return r;
        }
    };
    let infs = match infinite_equilibria(&field, tol) {
        Ok(v) => v,
        Err(e) => {
            r.note = Some(e.to_string());
            return r;
        }
    };
    r.infinite_equilibria = Some(infs.len());
    if !infs.is_empty() {
        r.note = Some(if eps == 0.0 {
            "criterion undefined: g has zeros (unperturbed field)".to_string()
        } else {
            format!(
                "g has {} zeros: polycycle persists or equilibria split, no cycle from the criterion",
                infs.len()
            )
        });
        return r;
    }
    let crit = cycle_integral(&field, tol);
    r.criterion_integral = Some(crit.integral);
    r.criterion_error = Some(crit.error_estimate);
    if crit.cycle_exists {
        match locate_cycle(&field, &CycleSearchOptions::default()) {
            Ok(c) => {
                r.cycle_found = true;
                r.cycle_mean_radius = Some(c.mean_radius);
                r.cycle_fixed_point_radius = Some(c.fixed_point_radius);
                r.return_derivative = Some(c.return_derivative);
            }
            Err(e) => r.note = Some(format!("criterion predicts a cycle but the oracle failed: {e}")),
        }
    } else {
        r.note = Some("criterion predicts no cycle".into());
    }
    r
}

/// Runs the sweep. Rows keep the order of `grid`.
pub fn run_sweep(base: &StarField, grid: &[f64], tol: &Tolerances) -> Result<SweepSummary, SweepError> {
    let verdict = assemble_portrait(base, tol).verdict;
    if verdict != Verdict::HeteroclinicCycle {
        return Err(SweepError::NotHeteroclinic(verdict));
    }
    let rows: Vec<SweepRow> = grid.iter().map(|&e| row(base, e, tol)).collect();
    let mut valued: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.criterion_integral.map(|i| (r.eps, i)))
        .collect();
    valued.sort_by(|a, b| b.0.total_cmp(&a.0));
    let positive: Vec<&SweepRow> = rows.iter().filter(|r| r.eps > 0.0).collect();
    Ok(SweepSummary {
        base_verdict: verdict,
        tolerances: *tol,
        all_integrals_negative: valued.iter().all(|v| v.1 < 0.0),
        integrals_decrease_with_eps: valued.windows(2).all(|w| w[1].1 < w[0].1),
        cycle_for_every_positive_eps: !positive.is_empty() && positive.iter().all(|r| r.cycle_found),
        rows,
    })
}

/// CSV with header `eps,criterion_integral,cycle_found,cycle_mean_radius`;
/// missing values are empty cells.
pub fn to_csv(summary: &SweepSummary) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["eps", "criterion_integral", "cycle_found", "cycle_mean_radius"])
        .expect("in-memory write");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &summary.rows {
        w.write_record([
            r.eps.to_string(),
            opt(r.criterion_integral),
            r.cycle_found.to_string(),
            opt(r.cycle_mean_radius),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_eps_grid(DEFAULT_EPS_GRID).unwrap(), vec![0.2, 0.1, 0.05, 0.025]);
        assert!(parse_eps_grid("0.1,abc").is_err());
        assert!(parse_eps_grid("").is_err());
    }

    #[test]
    fn non_heteroclinic_base_is_rejected() {
        let f = StarField::from_coeffs(1.0, vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(run_sweep(&f, &[0.1], &Tolerances::default()), Err(SweepError::NotHeteroclinic(_))));
    }

    #[test]
    fn zero_and_negative_eps_rows_are_flagged() {
        let f = StarField::from_coeffs(1.0, vec![0.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0, -1.0]).unwrap();
        let s = run_sweep(&f, &[0.0, -0.1], &Tolerances::default()).unwrap();
        for r in &s.rows {
            assert!(r.criterion_integral.is_none() && !r.cycle_found);
            assert!(r.note.is_some());
        }
        let csv = to_csv(&s);
        assert!(csv.starts_with("eps,criterion_integral,cycle_found,cycle_mean_radius\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
