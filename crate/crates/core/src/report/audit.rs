//! Canonical-form audit over a parameter grid.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canonical::{consistency_check, instantiate, CanonicalSpec, CheckStatus, ConsistencyReport, FormId, FormParams};
use crate::config::Tolerances;

pub const DEFAULT_GRID: &str = "-1.5,-0.5,0,0.75,2";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    #[serde(rename = "MATCH")]
    pub matches: usize,
    #[serde(rename = "MISMATCH")]
    pub mismatches: usize,
}

impl Tally {
    pub fn total(&self) -> usize {
        self.matches + self.mismatches
    }

    pub fn match_fraction(&self) -> f64 {
        if self.total() == 0 {
            1.0
        } else {
            self.matches as f64 / self.total() as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormSummary {
    pub form: FormId,
    pub points: usize,
    /// Grid points rejected by the form's parameter constraints.
    pub skipped: usize,
    pub properties: BTreeMap<String, Tally>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub degree: usize,
    pub grid: Vec<f64>,
    pub tolerances: Tolerances,
    pub forms: Vec<FormSummary>,
    /// Only the reports containing at least one mismatch or diagnostic.
    pub flagged: Vec<ConsistencyReport>,
}

impl AuditSummary {
    pub fn form(&self, form: FormId) -> Option<&FormSummary> {
        self.forms.iter().find(|f| f.form == form)
    }

    pub fn tally(&self, form: FormId, property: &str) -> Tally {
        self.form(form)
            .and_then(|f| f.properties.get(property).copied())
            .unwrap_or_default()
    }
}

fn mu_values(form: FormId) -> &'static [f64] {
    match form {
        FormId::I => &[-3.0, -1.0, -0.5],
        FormId::II => &[-0.25, 0.0, 0.6, 2.0],
        FormId::III => &[-2.0, -0.2, 0.0, 1.0],
        _ => &[0.0],
    }
}

/// Parameter points of one form.
pub fn grid_points(form: FormId, grid: &[f64]) -> Vec<CanonicalSpec> {
    let mut out = Vec::new();
    let signs = [1.0, -1.0];
    for &lambda in &signs {
        if form.degree() == 2 {
            for &q1 in grid {
                for &q2 in grid {
                    let params = FormParams {
                        q1,
                        q2,
                        ..Default::default()
                    };
                    out.push(CanonicalSpec::new(form, params, lambda));
                }
            }
            continue;
        }
        let has_mu = matches!(form, FormId::I | FormId::II | FormId::III);
        let sign_choices: &[f64] = if matches!(form, FormId::X) { &[1.0] } else { &signs };
        for &p1 in grid {
            for &p2 in grid {
                for &p3 in grid {
                    for &sign in sign_choices {
                        for &mu in mu_values(form) {
                            let params = FormParams {
                                p1,
                                p2,
                                p3,
                                alpha: sign,
                                beta: sign,
                                mu: has_mu.then_some(mu),
                                ..Default::default()
                            };
                            out.push(CanonicalSpec::new(form, params, lambda));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn parse_grid(spec: &str) -> Option<Vec<f64>> {
    let v: Result<Vec<f64>, _> = spec.split(',').map(|t| t.trim().parse::<f64>()).collect();
    v.ok().filter(|g| !g.is_empty() && g.iter().all(|x| x.is_finite()))
}

pub fn audit(degree: usize, grid: &[f64], tol: &Tolerances) -> AuditSummary {
    let forms: &[FormId] = if degree == 2 { &FormId::QUADRATIC } else { &FormId::CUBIC };
    let mut summaries = Vec::new();
    let mut flagged = Vec::new();
    for &form in forms {
        let mut s = FormSummary {
            form,
            points: 0,
            skipped: 0,
            properties: BTreeMap::new(),
        };
        for spec in grid_points(form, grid) {
            if instantiate(&spec).is_err() {
                s.skipped += 1;
                continue;
            }
            s.points += 1;
            let rep = consistency_check(&spec, tol);
            for c in &rep.checks {
                let t = s.properties.entry(c.property.clone()).or_default();
                match c.status {
                    CheckStatus::Match => t.matches += 1,
                    CheckStatus::Mismatch => t.mismatches += 1,
                }
            }
            if rep.checks.iter().any(|c| c.status == CheckStatus::Mismatch) || !rep.diagnostics.is_empty() {
                flagged.push(rep);
            }
        }
        summaries.push(s);
    }
    AuditSummary {
        degree,
        grid: grid.to_vec(),
        tolerances: *tol,
        forms: summaries,
        flagged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_ix_matches_on_the_grid() {
        let a = audit(3, &parse_grid(DEFAULT_GRID).unwrap(), &Tolerances::default());
        for prop in ["count", "angles", "stability_classes"] {
            let t = a.tally(FormId::IX, prop);
            assert!(t.total() > 0 && t.mismatches == 0, "{prop}: {t:?}");
        }
        // p = 0 makes form X vanish identically.
        assert_eq!(a.form(FormId::X).unwrap().skipped, 2);
    }
}
