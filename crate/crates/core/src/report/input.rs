//! The JSON input document.
//!
//! ```json
//! { "lambda": 1.0, "degree": 3, "Q1": [0, 0, -1, 0], "Q2": [1, 0, 0, -1] }
//! ```
//!
//! or, for a canonical form,
//!
//! ```json
//! { "canonical": { "form": "IX", "params": { "p3": -1 }, "lambda_sign": 1 } }
//! ```
//!
//! Coefficient `k` multiplies `x^(n-k) y^k`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{instantiate, CanonicalError, CanonicalSpec};
use crate::poly::{FieldError, StarField};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Schema(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(rename = "Q1", default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<Vec<f64>>,
    #[serde(rename = "Q2", default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalSpec>,
}

impl FieldInput {
    pub fn from_field(field: &StarField) -> Self {
        Self {
            lambda: Some(field.lambda()),
            degree: Some(field.degree()),
            q1: Some(field.q1().coeffs().to_vec()),
            q2: Some(field.q2().coeffs().to_vec()),
            canonical: None,
        }
    }

    pub fn from_canonical(spec: CanonicalSpec) -> Self {
        Self {
            lambda: None,
            degree: None,
            q1: None,
            q2: None,
            canonical: Some(spec),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a file, or parses `source` itself when it starts with `{`.
    pub fn load(source: &str) -> Result<Self, InputError> {
        if source.trim_start().starts_with('{') {
            return Self::from_json(source);
        }
        let text = std::fs::read_to_string(Path::new(source)).map_err(|e| InputError::Io {
            path: source.to_string(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn to_field(&self) -> Result<StarField, InputError> {
        let has_coeffs = self.q1.is_some() || self.q2.is_some();
        match (&self.canonical, has_coeffs) {
            (Some(_), true) => Err(InputError::Schema(
                "give either Q1/Q2 or canonical, not both".into(),
            )),
            (Some(spec), false) => {
                if self.lambda.is_some() || self.degree.is_some() {
                    return Err(InputError::Schema(
                        "lambda and degree come from the canonical spec".into(),
                    ));
                }
                Ok(instantiate(spec)?)
            }
            (None, false) => Err(InputError::Schema("missing Q1/Q2 or canonical".into())),
            (None, true) => {
                let (Some(q1), Some(q2)) = (&self.q1, &self.q2) else {
                    return Err(InputError::Schema("Q1 and Q2 must both be present".into()));
                };
                let lambda = self
                    .lambda
                    .ok_or_else(|| InputError::Schema("missing lambda".into()))?;
                let degree = self
                    .degree
                    .ok_or_else(|| InputError::Schema("missing degree".into()))?;
                if q1.len() != degree + 1 || q2.len() != degree + 1 {
                    return Err(InputError::Schema(format!(
                        "degree {degree} needs {} coefficients per component, got {} and {}",
                        degree + 1,
                        q1.len(),
                        q2.len()
                    )));
                }
                Ok(StarField::from_coeffs(lambda, q1.clone(), q2.clone())?)
            }
        }
    }
}
