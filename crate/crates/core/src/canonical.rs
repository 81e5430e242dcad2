//! Canonical families of quadratic and cubic nonlinearities, their
//! tabulated data at infinity, and a check of the tables against the
//! engine.
//!
//! The printed right-hand sides are instantiated verbatim. Where the
//! printed coefficients and the tabulated `x Q2 − y Q1` disagree, the
//! engine's own roots win and the difference shows up as a `Mismatch` in
//! [`consistency_check`]. [`from_binary_form`] builds a field with a
//! prescribed angular form directly.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Tolerances;
use crate::poly::{FieldError, StarField};
use crate::portrait::{assemble_portrait, Verdict};
use crate::roots::{infinite_equilibria, InfiniteEquilibrium};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    #[serde(rename = "i")]
    Qi,
    #[serde(rename = "ii")]
    Qii,
    #[serde(rename = "iii")]
    Qiii,
    #[serde(rename = "iv")]
    Qiv,
    #[serde(rename = "v")]
    Qv,
}

impl FormId {
    pub const CUBIC: [FormId; 10] = [
        FormId::I,
        FormId::II,
        FormId::III,
        FormId::IV,
        FormId::V,
        FormId::VI,
        FormId::VII,
        FormId::VIII,
        FormId::IX,
        FormId::X,
    ];
    pub const QUADRATIC: [FormId; 5] = [FormId::Qi, FormId::Qii, FormId::Qiii, FormId::Qiv, FormId::Qv];

    pub fn degree(&self) -> usize {
        if Self::QUADRATIC.contains(self) {
            2
        } else {
            3
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::V => "V",
            Self::VI => "VI",
            Self::VII => "VII",
            Self::VIII => "VIII",
            Self::IX => "IX",
            Self::X => "X",
            Self::Qi => "i",
            Self::Qii => "ii",
            Self::Qiii => "iii",
            Self::Qiv => "iv",
            Self::Qv => "v",
        }
    }

    fn uses_beta(&self) -> bool {
        matches!(self, Self::I | Self::III | Self::VIII)
    }

    fn uses_alpha(&self) -> bool {
        matches!(self, Self::II | Self::IV | Self::V | Self::VI | Self::VII | Self::IX)
    }

    fn uses_mu(&self) -> bool {
        matches!(self, Self::I | Self::II | Self::III)
    }
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormId {
    type Err = CanonicalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::CUBIC
            .iter()
            .chain(Self::QUADRATIC.iter())
            .copied()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| CanonicalError::UnknownForm(s.to_string()))
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormParams {
    #[serde(default)]
    pub q1: f64,
    #[serde(default)]
    pub q2: f64,
    #[serde(default)]
    pub p1: f64,
    #[serde(default)]
    pub p2: f64,
    #[serde(default)]
    pub p3: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default)]
    pub mu: Option<f64>,
}

impl Default for FormParams {
    fn default() -> Self {
        Self {
            q1: 0.0,
            q2: 0.0,
            p1: 0.0,
            p2: 0.0,
            p3: 0.0,
            alpha: 1.0,
            beta: 1.0,
            mu: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalSpec {
    pub form: FormId,
    #[serde(default)]
    pub params: FormParams,
    #[serde(default = "one")]
    pub lambda_sign: f64,
    #[serde(default = "one")]
    pub lambda_magnitude: f64,
}

impl CanonicalSpec {
    pub fn new(form: FormId, params: FormParams, lambda_sign: f64) -> Self {
        Self {
            form,
            params,
            lambda_sign,
            lambda_magnitude: 1.0,
        }
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda_sign.signum() * self.lambda_magnitude
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CanonicalError {
    #[error("unknown canonical form {0:?}")]
    UnknownForm(String),
    #[error("parameter constraint violated for form {form}: {reason}")]
    ParamConstraintViolated { form: FormId, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn violated(form: FormId, reason: impl Into<String>) -> CanonicalError {
    CanonicalError::ParamConstraintViolated {
        form,
        reason: reason.into(),
    }
}

pub fn validate(spec: &CanonicalSpec) -> Result<(), CanonicalError> {
    let f = spec.form;
    let p = &spec.params;
    if spec.lambda_sign.abs() != 1.0 {
        return Err(violated(f, "lambda_sign must be +1 or -1"));
    }
    if !(spec.lambda_magnitude > 0.0 && spec.lambda_magnitude.is_finite()) {
        return Err(violated(f, "lambda_magnitude must be positive"));
    }
    if f.uses_alpha() && p.alpha.abs() != 1.0 {
        return Err(violated(f, "alpha must be +1 or -1"));
    }
    if f.uses_beta() && p.beta.abs() != 1.0 {
        return Err(violated(f, "beta must be +1 or -1"));
    }
    if f.uses_mu() {
        let Some(mu) = p.mu else {
            return Err(violated(f, "mu is required"));
        };
        match f {
            FormId::I if mu >= -1.0 / 3.0 => return Err(violated(f, "mu < -1/3 required")),
            FormId::II if mu <= -1.0 / 3.0 || mu == 1.0 / 3.0 => {
                return Err(violated(f, "mu > -1/3 and mu != 1/3 required"))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Printed coefficient vectors `(Q1, Q2)`, `c_k ↔ x^(n−k) y^k`.
pub fn printed_coefficients(spec: &CanonicalSpec) -> (Vec<f64>, Vec<f64>) {
    let FormParams {
        q1,
        q2,
        p1,
        p2,
        p3,
        alpha: a,
        beta: b,
        mu,
    } = spec.params;
    let m = mu.unwrap_or(0.0);
    let scaled = |v: [f64; 4], s: f64| v.iter().map(|c| c * s).collect::<Vec<_>>();
    match spec.form {
        FormId::I => (scaled([p1, p2 - 3.0 * m, p3, -1.0], b), scaled([1.0, p1, p2 + 3.0 * m, p3], b)),
        FormId::II => (vec![p1, p2 - 3.0 * a * m, p3, -a], vec![a, p1, p2 + 3.0 * a * m, p3]),
        FormId::III => (scaled([p1, p2 - 3.0 * m, p3, 1.0], b), scaled([1.0, p1, p2 + 3.0 * m, p3], b)),
        FormId::IV => (vec![p1, p2 - 3.0 * a, p3, -a], vec![0.0, p1, p2 + 3.0 * a, p3]),
        // The printed second equation has a stray `y` in `p1 x²y`; read as
        // `p1 x²` so that the field is homogeneous.
        FormId::V => (vec![p1, p2 - 3.0 * a, p3, a], vec![0.0, p1, p2 + 3.0 * a, p3]),
        FormId::VI => (vec![p1, p2 - a, p3, -a], vec![a, p1, p2 + a, p3]),
        FormId::VII => (vec![p1, p2 - 3.0 * a, p3, 0.0], vec![0.0, p1, p2 + 3.0 * a, p3]),
        FormId::VIII => (scaled([p1 - 1.0, p2, p3, 0.0], b), scaled([0.0, p1 + 3.0, p2, p3], b)),
        FormId::IX => (vec![p1, p2, p3, 0.0], vec![a, p1, p2, p3]),
        FormId::X => (vec![p1, p2, p3, 0.0], vec![0.0, p1, p2, p3]),
        FormId::Qi => (vec![-1.0, q1, q2], vec![q1, q2, 1.0]),
        FormId::Qii => (vec![-1.0, q1, q2], vec![q1, q2 - 3.0, 0.0]),
        FormId::Qiii => (vec![0.0, q1 - 3.0, q2], vec![q1, q2, 0.0]),
        FormId::Qiv => (vec![-1.0, q1, q2], vec![q1, q2, 0.0]),
        FormId::Qv => (vec![0.0, q1, q2], vec![q1, q2, 0.0]),
    }
}

/// Builds the field of a canonical form from its printed right-hand side.
pub fn instantiate(spec: &CanonicalSpec) -> Result<StarField, CanonicalError> {
    validate(spec)?;
    let (q1, q2) = printed_coefficients(spec);
    Ok(StarField::from_coeffs(spec.lambda(), q1, q2)?)
}

/// A quadratic field whose angular form `x Q2 − y Q1` is the cubic
/// `a0 x³ + a1 x²y + a2 xy² + a3 y³`:
/// `Q1 = q1 x² + q2 xy − a3 y²`, `Q2 = a0 x² + (a1 + q1) xy + (a2 + q2) y²`.
///
/// The free pair `(q1, q2)` moves `Q` along the kernel `(x h, y h)`.
pub fn from_binary_form(a: [f64; 4], q1: f64, q2: f64, lambda: f64) -> Result<StarField, FieldError> {
    StarField::from_coeffs(lambda, vec![q1, q2, -a[3]], vec![a[0], a[1] + q1, a[2] + q2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum InfinityCount {
    Finite(usize),
    Infinite,
}

/// Multiplicity classes of the zeros of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub simple: usize,
    pub even: usize,
    pub odd_multiple: usize,
}

impl ClassCounts {
    pub fn of(infs: &[InfiniteEquilibrium]) -> Self {
        let mut c = Self::default();
        for e in infs {
            match e.multiplicity {
                1 => c.simple += 1,
                m if m % 2 == 0 => c.even += 1,
                _ => c.odd_multiple += 1,
            }
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedInfinity {
    pub count: InfinityCount,
    pub angles: Option<Vec<f64>>,
    pub classes: Option<ClassCounts>,
    pub stability_summary: String,
}

fn expected(count: InfinityCount, angles: Option<Vec<f64>>, classes: Option<ClassCounts>, summary: &str) -> ExpectedInfinity {
    ExpectedInfinity {
        count,
        angles,
        classes,
        stability_summary: summary.to_string(),
    }
}

fn cls(simple: usize, even: usize, odd_multiple: usize) -> Option<ClassCounts> {
    Some(ClassCounts {
        simple,
        even,
        odd_multiple,
    })
}

/// The tabulated count and angular stability of the infinite equilibria.
pub fn expected_infinity(form: FormId) -> ExpectedInfinity {
    use InfinityCount::*;
    let axes = || Some(vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]);
    match form {
        FormId::I => expected(Finite(8), None, cls(8, 0, 0), "8 hyperbolic"),
        FormId::II => expected(Finite(0), None, cls(0, 0, 0), "none"),
        FormId::III => expected(Finite(4), None, cls(4, 0, 0), "4 hyperbolic"),
        FormId::IV => expected(Finite(2), None, cls(0, 2, 0), "2 saddle-nodes"),
        FormId::V => expected(Finite(6), None, cls(4, 2, 0), "4 hyperbolic, 2 saddle-nodes"),
        FormId::VI => expected(Finite(0), None, cls(0, 0, 0), "none"),
        FormId::VII => expected(Finite(4), axes(), cls(0, 4, 0), "4 saddle-nodes"),
        FormId::VIII => expected(Finite(4), axes(), cls(2, 0, 2), "2 hyperbolic, 2 hyperbolic-like"),
        FormId::IX => expected(
            Finite(2),
            Some(vec![FRAC_PI_2, 3.0 * FRAC_PI_2]),
            cls(0, 2, 0),
            "2 saddle-nodes",
        ),
        FormId::X => expected(Infinite, None, None, "continuum"),
        FormId::Qi => expected(Finite(2), Some(vec![3.0 * PI / 4.0, 7.0 * PI / 4.0]), cls(2, 0, 0), "2 hyperbolic"),
        FormId::Qii => expected(
            Finite(6),
            Some((0..6).map(|k| (2 * k + 1) as f64 * PI / 6.0).collect()),
            cls(6, 0, 0),
            "6 hyperbolic",
        ),
        FormId::Qiii => expected(Finite(4), axes(), None, "4 saddle-nodes"),
        FormId::Qiv => expected(
            Finite(2),
            Some(vec![FRAC_PI_2, 3.0 * FRAC_PI_2]),
            cls(0, 0, 2),
            "non-hyperbolic attractor and repellor",
        ),
        FormId::Qv => expected(Infinite, None, None, "continuum"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignRelation {
    Positive,
    Negative,
    Zero,
    NonNegative,
}

impl SignRelation {
    pub fn holds(&self, v: f64, tol: f64) -> bool {
        match self {
            Self::Positive => v > tol,
            Self::Negative => v < -tol,
            Self::Zero => v.abs() <= tol,
            Self::NonNegative => v >= -tol,
        }
    }
}

/// A predicted sign of `f` at a given angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FSignClaim {
    pub theta: f64,
    pub relation: SignRelation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasePrediction {
    pub form: FormId,
    pub label: String,
    pub claims: Vec<FSignClaim>,
}

fn claim(theta: f64, relation: SignRelation) -> FSignClaim {
    FSignClaim { theta, relation }
}

fn strict(v: f64) -> SignRelation {
    if v > 0.0 {
        SignRelation::Positive
    } else if v < 0.0 {
        SignRelation::Negative
    } else {
        SignRelation::Zero
    }
}

/// Angles on which the sign predicate of the degenerate quadratic form is
/// checked; they avoid the axes and the line `q1 x + q2 y = 0`.
fn probe_angles(q1: f64, q2: f64) -> Vec<f64> {
    (0..48)
        .map(|i| (i as f64 + 0.5) * PI / 24.0)
        .filter(|t| {
            let (s, c) = t.sin_cos();
            (q1 * c + q2 * s).abs() > 1e-6 * (q1.abs() + q2.abs())
        })
        .collect()
}

/// Case and the predicted signs of `f` at the tabulated zeros of `g`, for
/// the quadratic forms `(i)`–`(v)`.
///
/// Returns `None` for a cubic form. The claims concern `f` alone; `λ` only
/// enters through the label.
pub fn degree2_case(form: FormId, q1: f64, q2: f64, lambda: f64) -> Option<CasePrediction> {
    use SignRelation::*;
    let lam = if lambda > 0.0 { "" } else { " (lambda < 0)" };
    let s3 = 3f64.sqrt();
    let (label, claims) = match form {
        FormId::Qi => {
            let d = q2 - q1 - 1.0;
            let (t1, t2) = (7.0 * PI / 4.0, 3.0 * PI / 4.0);
            let label = if d > 0.0 {
                "q2-q1>1"
            } else if d < 0.0 {
                "q2-q1<1"
            } else {
                "q2-q1=1"
            };
            (label.to_string(), vec![claim(t1, strict(d)), claim(t2, strict(-d))])
        }
        FormId::Qii => {
            let (t1, t3) = (PI / 6.0, 5.0 * PI / 6.0);
            let below = q2 < 3.0 - s3 * q1;
            let under = q2 <= 3.0 + s3 * q1;
            let (label, c1, c3) = match (below, under) {
                (true, true) => ("q2<3-sqrt3*q1 and q2<=3+sqrt3*q1", Negative, NonNegative),
                (false, false) => ("q2>=3-sqrt3*q1 and q2>3+sqrt3*q1", NonNegative, Negative),
                (false, true) => ("q2>=3-sqrt3*q1 and q2<=3+sqrt3*q1", NonNegative, NonNegative),
                (true, false) => ("q2<3-sqrt3*q1 and q2>3+sqrt3*q1", Negative, Negative),
            };
            (label.to_string(), vec![claim(t1, c1), claim(t3, c3)])
        }
        FormId::Qiii => (
            "f=0 at every zero of g".to_string(),
            (0..4).map(|k| claim(k as f64 * FRAC_PI_2, Zero)).collect(),
        ),
        FormId::Qiv => (
            "f=0 at every zero of g".to_string(),
            vec![claim(FRAC_PI_2, Zero), claim(3.0 * FRAC_PI_2, Zero)],
        ),
        FormId::Qv => {
            let label = if q1 * q2 != 0.0 {
                "q1q2!=0"
            } else if q1 + q2 != 0.0 {
                "q1q2=0 and q1+q2!=0"
            } else {
                "q1=q2=0"
            };
            let claims = probe_angles(q1, q2)
                .into_iter()
                .map(|t| {
                    let (s, c) = t.sin_cos();
                    let v = c * s * (q1 * c + q2 * s);
                    claim(t, if v >= 0.0 { NonNegative } else { Negative })
                })
                .collect();
            (label.to_string(), claims)
        }
        _ => return None,
    };
    Some(CasePrediction {
        form,
        label: format!("{label}{lam}"),
        claims,
    })
}

/// The inequality pairs printed for the degenerate quadratic form, as a
/// predicate for `f(θ) ≥ 0`. Kept separate from [`degree2_case`] because
/// the pairs for `q1 q2 ≠ 0` do not follow from the factored radial form.
pub fn printed_qv_predicate(q1: f64, q2: f64, theta: f64) -> bool {
    let (y, x) = theta.sin_cos();
    if q1 == 0.0 {
        q2 * x >= 0.0
    } else if q2 == 0.0 {
        q1 * y >= 0.0
    } else if q1 * q2 > 0.0 {
        (x >= 0.0 && y >= 0.0) || (x * y <= 0.0 && q2 * y <= -q1 * x)
    } else {
        (x <= 0.0 && y >= 0.0) || (x * y >= 0.0 && q2 * y <= -q1 * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckStatus {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: String,
    pub status: CheckStatus,
    pub expected: String,
    pub engine: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub spec: CanonicalSpec,
    pub checks: Vec<PropertyCheck>,
    pub engine_verdict: Option<Verdict>,
    pub diagnostics: Vec<String>,
}

impl ConsistencyReport {
    pub fn status_of(&self, property: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.property == property).map(|c| c.status)
    }
}

fn check(property: &str, ok: bool, expected: String, engine: String) -> PropertyCheck {
    PropertyCheck {
        property: property.to_string(),
        status: if ok { CheckStatus::Match } else { CheckStatus::Mismatch },
        expected,
        engine,
    }
}

fn fmt_angles(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|t| format!("{t:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Compares the engine's analysis of `instantiate(spec)` with the
/// tabulated data. Never fails: problems become `Mismatch` rows or
/// diagnostics.
pub fn consistency_check(spec: &CanonicalSpec, tol: &Tolerances) -> ConsistencyReport {
    let mut rep = ConsistencyReport {
        spec: *spec,
        checks: Vec::new(),
        engine_verdict: None,
        diagnostics: Vec::new(),
    };
    let field = match instantiate(spec) {
        Ok(f) => f,
        Err(e) => {
            rep.diagnostics.push(e.to_string());
            return rep;
        }
    };
    let portrait = assemble_portrait(&field, tol);
    rep.engine_verdict = Some(portrait.verdict);
    rep.diagnostics.extend(portrait.consistency_failures.iter().cloned());
    let exp = expected_infinity(spec.form);
    let infs = infinite_equilibria(&field, tol);

    match (&exp.count, &infs) {
        (InfinityCount::Infinite, Err(_)) => rep.checks.push(check("count", true, "infinite".into(), "infinite".into())),
        (InfinityCount::Infinite, Ok(v)) => {
            rep.checks
                .push(check("count", false, "infinite".into(), v.len().to_string()));
            rep.diagnostics.push(format!(
                "angular form {:?} is not identically zero",
                field.angular_form().coeffs()
            ));
        }
        (InfinityCount::Finite(n), Ok(v)) => {
            rep.checks.push(check("count", *n == v.len(), n.to_string(), v.len().to_string()));
            if *n != v.len() {
                rep.diagnostics.push(format!(
                    "zeros of g at {} with multiplicities {:?}; angular form {:?}",
                    fmt_angles(&v.iter().map(|e| e.theta).collect::<Vec<_>>()),
                    v.iter().map(|e| e.multiplicity).collect::<Vec<_>>(),
                    field.angular_form().coeffs()
                ));
            }
        }
        (InfinityCount::Finite(n), Err(_)) => {
            rep.checks.push(check("count", false, n.to_string(), "infinite".into()))
        }
    }

    if let Ok(v) = &infs {
        let got: Vec<f64> = v.iter().map(|e| e.theta).collect();
        if let Some(want) = &exp.angles {
            let ok = want.len() == got.len() && want.iter().zip(&got).all(|(a, b)| (a - b).abs() < 1e-8);
            rep.checks.push(check("angles", ok, fmt_angles(want), fmt_angles(&got)));
        }
        if let Some(want) = exp.classes {
            let c = ClassCounts::of(v);
            rep.checks
                .push(check("stability_classes", c == want, format!("{want:?}"), format!("{c:?}")));
        }
    }

    if let Some(pred) = degree2_case(spec.form, spec.params.q1, spec.params.q2, spec.lambda()) {
        let ftol = field.f_zero_threshold(tol);
        let bad: Vec<String> = pred
            .claims
            .iter()
            .filter_map(|c| {
                let v = field.radial_coeff(c.theta);
                (!c.relation.holds(v, ftol)).then(|| format!("f({:.6}) = {v:.3e}, expected {:?}", c.theta, c.relation))
            })
            .collect();
        rep.checks.push(check(
            "case_prediction",
            bad.is_empty(),
            pred.label.clone(),
            if bad.is_empty() { pred.label.clone() } else { bad.join("; ") },
        ));
        if spec.form == FormId::Qv {
            let (q1, q2) = (spec.params.q1, spec.params.q2);
            let misses = probe_angles(q1, q2)
                .into_iter()
                .filter(|&t| printed_qv_predicate(q1, q2, t) != (field.radial_coeff(t) >= 0.0))
                .count();
            rep.checks.push(check(
                "printed_case_inequalities",
                misses == 0,
                "printed inequality pairs".into(),
                format!("{misses} probe angles disagree"),
            ));
        }
    }
    rep
}
