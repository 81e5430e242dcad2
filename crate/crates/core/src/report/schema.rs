//! The analysis report written by `analyze`.

use serde::{Deserialize, Serialize};

use super::input::FieldInput;
use crate::canonical::{consistency_check, ConsistencyReport};
use crate::config::Tolerances;
use crate::oracle::{cross_validate, CrossValidation, CrossValidationOptions};
use crate::poly::StarField;
use crate::portrait::{assemble_portrait, GlobalPortrait, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything the engine derived for one field, together with the
/// tolerances and seed that produced it.
///
/// The report holds no timestamps or host data, so identical inputs give
/// byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitReport {
    pub schema_version: u32,
    pub input: FieldInput,
    /// The instantiated nonlinearity when the input names a canonical form.
    pub field: FieldInput,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub verdict: Verdict,
    pub portrait: GlobalPortrait,
    pub canonical_consistency: Option<ConsistencyReport>,
    pub verification: Option<Verification>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub options: CrossValidationOptions,
    pub agrees: bool,
    pub result: CrossValidation,
}

impl PortraitReport {
    pub fn build(input: &FieldInput, field: &StarField, tol: &Tolerances, verify: Option<CrossValidationOptions>) -> Self {
        let mut portrait = assemble_portrait(field, tol);
        let verification = verify.map(|opts| {
            let result = cross_validate(field, &portrait, &opts, tol);
            Verification {
                options: opts,
                agrees: result.agrees(),
                result,
            }
        });
        if let Some(c) = verification.as_ref().and_then(|v| v.result.cycle.clone()) {
            portrait.cycle_profile = Some(c);
        }
        Self {
            schema_version: SCHEMA_VERSION,
            input: input.clone(),
            field: FieldInput::from_field(field),
            tolerances: *tol,
            seed: verify.map_or(CrossValidationOptions::default().seed, |o| o.seed),
            verdict: portrait.verdict,
            portrait,
            canonical_consistency: input.canonical.map(|s| consistency_check(&s, tol)),
            verification,
        }
    }

    /// Inconsistencies found by the engine or by the oracle cross-check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = self.portrait.consistency_failures.clone();
        if let Some(v) = &self.verification {
            out.extend(v.result.errors.iter().cloned());
            out.extend(v.result.checks.iter().filter_map(|c| c.contradiction.clone()));
            if !v.result.cone_invariance_ok {
                out.push("a sampled trajectory crossed an invariant diameter".into());
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
