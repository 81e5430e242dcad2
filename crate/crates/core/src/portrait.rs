//! Global structure: invariant half-cones and their sector pairs, the
//! limit-cycle criterion, polycycles, global attractors/repellors and the
//! degenerate continuum.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::equilibria::{
    check_counts, classify_infinite, finite_equilibria, CountReport, FiniteEquilibrium, NearZeroF,
    RadialStability, StabilityTag,
};
use crate::oracle::CycleProfile;
use crate::poly::{HomogeneousPoly, StarField};
use crate::quadrature;
use crate::roots::{circle_zeros, infinite_equilibria, InfiniteEquilibrium, RootError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorType {
    #[serde(rename = "P_plus")]
    PPlus,
    #[serde(rename = "P_minus")]
    PMinus,
    #[serde(rename = "H_plus")]
    HPlus,
    #[serde(rename = "H_minus")]
    HMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    A,
    B,
    C,
    D,
}

impl CaseTag {
    /// Case of a sector pair read in flow order (source end, sink end).
    pub fn from_flow_pair(source: SectorType, sink: SectorType) -> Option<Self> {
        use SectorType::*;
        match (source, sink) {
            (PMinus, PPlus) => Some(Self::A),
            (HPlus, HMinus) => Some(Self::B),
            (HPlus, PPlus) => Some(Self::C),
            (PMinus, HMinus) => Some(Self::D),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeGeometry {
    pub start: InfiniteEquilibrium,
    pub end: InfiniteEquilibrium,
    /// End angle, unwrapped so that `theta1 < theta2 <= theta1 + π`.
    pub theta2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfCone {
    pub theta1: f64,
    pub theta2: f64,
    pub g_sign_inside: i8,
    pub sector_at_theta1: SectorType,
    pub sector_at_theta2: SectorType,
    pub case_tag: CaseTag,
}

impl HalfCone {
    /// Sector pair in flow order: the end the angular flow leaves first.
    pub fn flow_pair(&self) -> (SectorType, SectorType) {
        if self.g_sign_inside > 0 {
            (self.sector_at_theta1, self.sector_at_theta2)
        } else {
            (self.sector_at_theta2, self.sector_at_theta1)
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = self.theta1 + (theta - self.theta1).rem_euclid(TAU);
        t > self.theta1 && t < self.theta2
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize, Deserialize)]
pub enum PortraitError {
    #[error("no infinite equilibria: the circle is not divided into cones")]
    NoInfiniteEquilibria,
    #[error("g vanishes at θ = {0} inside a cone between consecutive zeros")]
    ZeroInsideCone(f64),
    #[error("sector pair ({0:?}, {1:?}) is not admissible")]
    InadmissibleSectors(SectorType, SectorType),
}

/// Half-cones between consecutive infinite equilibria, in angular order.
pub fn cones(infs: &[InfiniteEquilibrium]) -> Result<Vec<ConeGeometry>, PortraitError> {
    if infs.is_empty() {
        return Err(PortraitError::NoInfiniteEquilibria);
    }
    let k = infs.len();
    Ok((0..k)
        .map(|i| {
            let start = infs[i];
            let end = infs[(i + 1) % k];
            let mut theta2 = end.theta;
            if theta2 <= start.theta {
                theta2 += TAU;
            }
            ConeGeometry { start, end, theta2 }
        })
        .collect())
}

pub fn classify_sectors(field: &StarField, cone: &ConeGeometry, tol: &Tolerances) -> Result<HalfCone, PortraitError> {
    let mid = 0.5 * (cone.start.theta + cone.theta2);
    let g_mid = field.angular_coeff(mid);
    if g_mid == 0.0 {
        return Err(PortraitError::ZeroInsideCone(mid));
    }
    let radial = |e: &InfiniteEquilibrium| classify_infinite(field, e, tol).radial;
    let source_sector = |r| match r {
        RadialStability::Repelling => SectorType::PMinus,
        RadialStability::Attracting => SectorType::HPlus,
    };
    let sink_sector = |r| match r {
        RadialStability::Repelling => SectorType::HMinus,
        RadialStability::Attracting => SectorType::PPlus,
    };
    let (r1, r2) = (radial(&cone.start), radial(&cone.end));
    let (s1, s2, source, sink) = if g_mid > 0.0 {
        let (a, b) = (source_sector(r1), sink_sector(r2));
        (a, b, a, b)
    } else {
        let (a, b) = (sink_sector(r1), source_sector(r2));
        (a, b, b, a)
    };
    let case_tag = CaseTag::from_flow_pair(source, sink).ok_or(PortraitError::InadmissibleSectors(source, sink))?;
    Ok(HalfCone {
        theta1: cone.start.theta,
        theta2: cone.theta2,
        g_sign_inside: if g_mid > 0.0 { 1 } else { -1 },
        sector_at_theta1: s1,
        sector_at_theta2: s2,
        case_tag,
    })
}

/// Value of `∫₀^{2π} f/|g| dθ` and the resulting cycle verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleCriterion {
    pub integral: f64,
    pub error_estimate: f64,
    pub min_abs_g: f64,
    pub lambda_times_integral: f64,
    pub cycle_exists: bool,
    /// `|I|` is within `10 · quad` of zero.
    pub boundary: bool,
    /// Set when the guard grid saw `min |g|` below the guard threshold.
    pub guard_failed: bool,
    pub hyperbolic: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CycleTestError {
    #[error("even degree: no periodic orbit surrounds the origin")]
    EvenDegree,
    #[error("g has zeros, so every orbit stays in an invariant cone")]
    HasInfiniteEquilibria,
}

fn min_abs_g(field: &StarField, grid: usize) -> f64 {
    (0..grid)
        .map(|i| field.angular_coeff(TAU * i as f64 / grid as f64).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Computes the criterion integral for an odd-degree field whose `g`
/// has no real zero.
pub fn limit_cycle_test(field: &StarField, tol: &Tolerances) -> Result<CycleCriterion, CycleTestError> {
    if field.degree().is_multiple_of(2) {
        return Err(CycleTestError::EvenDegree);
    }
    match infinite_equilibria(field, tol) {
        Ok(infs) if infs.is_empty() => {}
        _ => return Err(CycleTestError::HasInfiniteEquilibria),
    }
    Ok(cycle_integral(field, tol))
}

/// The criterion integral without the precondition checks.
pub fn cycle_integral(field: &StarField, tol: &Tolerances) -> CycleCriterion {
    let min_g = min_abs_g(field, tol.guard_grid);
    let q = quadrature::integrate(
        |t| field.radial_coeff(t) / field.angular_coeff(t).abs(),
        0.0,
        TAU,
        tol.quad,
        20_000,
    );
    let li = field.lambda() * q.value;
    let boundary = q.value.abs() <= 10.0 * tol.quad;
    let cycle_exists = !boundary && li < 0.0;
    CycleCriterion {
        integral: q.value,
        error_estimate: q.error_estimate,
        min_abs_g: min_g,
        lambda_times_integral: li,
        cycle_exists,
        boundary,
        guard_failed: min_g <= tol.guard_min_g,
        hyperbolic: cycle_exists,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolycycleKind {
    Polycycle,
    HeteroclinicCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolycycleInfo {
    pub kind: PolycycleKind,
    pub attracting: bool,
}

pub fn polycycle_test(
    field: &StarField,
    infs: &[InfiniteEquilibrium],
    _fins: &[FiniteEquilibrium],
    tol: &Tolerances,
) -> Option<PolycycleInfo> {
    if field.degree().is_multiple_of(2) || infs.is_empty() {
        return None;
    }
    let lambda = field.lambda();
    let ftol = field.f_zero_threshold(tol);
    let all_inner = infs.iter().all(|e| {
        let f = field.radial_coeff(e.theta);
        f.abs() > ftol && lambda * f < 0.0
    });
    if !all_inner {
        return None;
    }
    let kind = if infs.iter().all(|e| e.multiplicity % 2 == 0) {
        PolycycleKind::HeteroclinicCycle
    } else {
        PolycycleKind::Polycycle
    };
    Some(PolycycleInfo {
        kind,
        attracting: lambda > 0.0,
    })
}

/// Which sufficient condition established a global attractor/repellor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalCondition {
    /// Even degree, `f = 0` at every zero of `g`.
    EvenDegreeFVanishes,
    /// Odd degree, `λf ≥ 0` at every zero of `g`.
    OddDegreeNoInnerEquilibria,
    /// Odd degree, `g` without zeros and `λ I ≥ 0`.
    OddDegreeCriterion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalInfo {
    pub attractor: bool,
    pub condition: GlobalCondition,
    pub boundary: bool,
}

pub fn global_attractor_test(
    field: &StarField,
    infs: &[InfiniteEquilibrium],
    criterion: Option<&CycleCriterion>,
    tol: &Tolerances,
) -> Option<GlobalInfo> {
    let lambda = field.lambda();
    let ftol = field.f_zero_threshold(tol);
    let odd = field.degree() % 2 == 1;
    let make = |condition, boundary| GlobalInfo {
        attractor: lambda < 0.0,
        condition,
        boundary,
    };
    if !odd {
        let vanish = !infs.is_empty() && infs.iter().all(|e| field.radial_coeff(e.theta).abs() <= ftol);
        return vanish.then(|| make(GlobalCondition::EvenDegreeFVanishes, false));
    }
    if !infs.is_empty() {
        let ok = infs.iter().all(|e| {
            let f = field.radial_coeff(e.theta);
            f.abs() <= ftol || lambda * f > 0.0
        });
        return ok.then(|| make(GlobalCondition::OddDegreeNoInnerEquilibria, false));
    }
    let c = criterion?;
    (c.boundary || c.lambda_times_integral >= 0.0).then(|| make(GlobalCondition::OddDegreeCriterion, c.boundary))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegenerateCase {
    A,
    B,
    C,
    D,
    E,
}

/// Case of the cubic degenerate family `Q = (x p, y p)`,
/// `p = p1 x² + p2 xy + p3 y²`, from the determinant `D` and trace `T` of
/// the quadratic form. The labels refer to `λ > 0`; for `λ < 0` time is
/// reversed first, which replaces `p` by `−p`.
pub fn degenerate_case(p1: f64, p2: f64, p3: f64, lambda: f64) -> Option<DegenerateCase> {
    let s = lambda.signum();
    let (p1, p2, p3) = (s * p1, s * p2, s * p3);
    let d = p1 * p3 - p2 * p2 / 4.0;
    let t = p1 + p3;
    let scale = 1f64.max(p1 * p1).max(p2 * p2).max(p3 * p3);
    let d_zero = d.abs() <= 1e-12 * scale;
    match (d_zero, d > 0.0, t > 0.0) {
        (false, true, true) => Some(DegenerateCase::A),
        (false, true, false) => Some(DegenerateCase::B),
        (false, false, _) => Some(DegenerateCase::C),
        (true, _, true) if t != 0.0 => Some(DegenerateCase::D),
        (true, _, false) if t != 0.0 => Some(DegenerateCase::E),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumArc {
    pub theta_start: f64,
    pub theta_end: f64,
}

/// Finite equilibria of `Q = (x p, y p)`: on the ray at angle `θ` the
/// point with `p(cosθ, sinθ) rⁿ⁻¹ = −λ`, whenever `λ p(θ) < 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuumDescription {
    pub lambda: f64,
    pub degree: usize,
    pub kernel: HomogeneousPoly,
    pub kernel_zeros: Vec<f64>,
    pub arcs: Vec<EquilibriumArc>,
    pub full_circle: bool,
    pub origin_only: bool,
    /// Radius of the equilibrium circle when `p` is constant on the circle.
    pub circle_radius: Option<f64>,
    /// Equilibrium curves attract along rays iff `λ > 0`.
    pub curves_attracting: bool,
    pub degenerate_case: Option<DegenerateCase>,
}

impl ContinuumDescription {
    pub fn radius_at(&self, theta: f64) -> Option<f64> {
        let (s, c) = theta.sin_cos();
        let p = self.kernel.eval(c, s);
        if self.lambda * p >= 0.0 {
            return None;
        }
        Some((-self.lambda / p).powf(1.0 / (self.degree as f64 - 1.0)))
    }
}

pub fn degenerate_portrait(field: &StarField, p: &HomogeneousPoly, tol: &Tolerances) -> ContinuumDescription {
    let lambda = field.lambda();
    let n = field.degree();
    let zeros: Vec<f64> = circle_zeros(p, tol)
        .map(|zs| zs.into_iter().map(|z| z.theta).collect())
        .unwrap_or_default();
    let inner = |t: f64| {
        let (s, c) = t.sin_cos();
        lambda * p.eval(c, s) < 0.0
    };
    let mut arcs = Vec::new();
    let full_circle;
    if zeros.is_empty() {
        full_circle = inner(0.0);
        if full_circle {
            arcs.push(EquilibriumArc {
                theta_start: 0.0,
                theta_end: TAU,
            });
        }
    } else {
        full_circle = false;
        let k = zeros.len();
        for i in 0..k {
            let a = zeros[i];
            let mut b = zeros[(i + 1) % k];
            if b <= a {
                b += TAU;
            }
            if inner(0.5 * (a + b)) {
                arcs.push(EquilibriumArc {
                    theta_start: a,
                    theta_end: b,
                });
            }
        }
    }
    // p restricted to the circle is constant iff p = c (x² + y²)^(m/2).
    let circle_radius = if full_circle {
        let samples: Vec<f64> = (0..64)
            .map(|i| {
                let (s, c) = (TAU * i as f64 / 64.0).sin_cos();
                p.eval(c, s)
            })
            .collect();
        let p0 = samples[0];
        samples
            .iter()
            .all(|v| (v - p0).abs() <= 1e-12 * p0.abs().max(1.0))
            .then(|| (-lambda / p0).powf(1.0 / (n as f64 - 1.0)))
    } else {
        None
    };
    let degenerate_case = (n == 3).then(|| degenerate_case(p.coeff(0), p.coeff(1), p.coeff(2), lambda)).flatten();
    ContinuumDescription {
        lambda,
        degree: n,
        kernel: p.clone(),
        kernel_zeros: zeros,
        origin_only: arcs.is_empty(),
        arcs,
        full_circle,
        circle_radius,
        curves_attracting: lambda > 0.0,
        degenerate_case,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    GlobalAttractor,
    GlobalRepellor,
    LimitCycle,
    Polycycle,
    HeteroclinicCycle,
    DegenerateContinuum,
    /// Finite equilibria on some invariant radii and no closed separatrix
    /// loop: the plane decomposes into cones with the dynamics of the
    /// listed sector pairs.
    InvariantCones,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::GlobalAttractor => "global_attractor",
            Self::GlobalRepellor => "global_repellor",
            Self::LimitCycle => "limit_cycle",
            Self::Polycycle => "polycycle",
            Self::HeteroclinicCycle => "heteroclinic_cycle",
            Self::DegenerateContinuum => "degenerate_continuum",
            Self::InvariantCones => "invariant_cones",
        }
    }

    pub fn has_periodic_orbit(&self) -> bool {
        matches!(self, Self::LimitCycle)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfiniteRecord {
    #[serde(flatten)]
    pub equilibrium: InfiniteEquilibrium,
    pub f_value: f64,
    pub stability: StabilityTag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalPortrait {
    pub verdict: Verdict,
    pub degree: usize,
    pub lambda: f64,
    pub infinite: Vec<InfiniteRecord>,
    pub finite: Vec<FiniteEquilibrium>,
    pub cones: Vec<HalfCone>,
    pub cycle: Option<CycleCriterion>,
    pub cycle_profile: Option<CycleProfile>,
    pub polycycle: Option<PolycycleInfo>,
    pub global: Option<GlobalInfo>,
    pub continuum: Option<ContinuumDescription>,
    pub counts: Option<CountReport>,
    pub boundary: Vec<NearZeroF>,
    pub warnings: Vec<String>,
    /// Internal inconsistencies; non-empty means a bug or a numerical tie
    /// the engine could not resolve.
    pub consistency_failures: Vec<String>,
}

impl GlobalPortrait {
    fn empty(field: &StarField, verdict: Verdict) -> Self {
        Self {
            verdict,
            degree: field.degree(),
            lambda: field.lambda(),
            infinite: Vec::new(),
            finite: Vec::new(),
            cones: Vec::new(),
            cycle: None,
            cycle_profile: None,
            polycycle: None,
            global: None,
            continuum: None,
            counts: None,
            boundary: Vec::new(),
            warnings: Vec::new(),
            consistency_failures: Vec::new(),
        }
    }

    pub fn infinite_equilibria(&self) -> Vec<InfiniteEquilibrium> {
        self.infinite.iter().map(|r| r.equilibrium).collect()
    }
}

fn global_verdict(info: &GlobalInfo) -> Verdict {
    if info.attractor {
        Verdict::GlobalAttractor
    } else {
        Verdict::GlobalRepellor
    }
}

pub fn assemble_portrait(field: &StarField, tol: &Tolerances) -> GlobalPortrait {
    if let Some(p) = field.degenerate_kernel(tol) {
        let mut out = GlobalPortrait::empty(field, Verdict::DegenerateContinuum);
        out.continuum = Some(degenerate_portrait(field, &p, tol));
        return out;
    }
    let infs = match infinite_equilibria(field, tol) {
        Ok(v) => v,
        Err(RootError::DegenerateContinuum) | Err(RootError::IdenticallyZero) => {
            let mut out = GlobalPortrait::empty(field, Verdict::DegenerateContinuum);
            out.warnings
                .push("g vanishes to tolerance although y Q1 = x Q2 fails coefficient-wise".into());
            return out;
        }
    };
    let mut out = GlobalPortrait::empty(field, Verdict::InvariantCones);
    let scan = finite_equilibria(field, &infs, tol);
    for b in &scan.boundary {
        out.warnings.push(format!(
            "f(θ) = {:.3e} at θ = {:.12} is within the zero threshold {:.3e}; no finite equilibrium reported on this radius",
            b.f_value, b.theta, b.threshold
        ));
    }
    out.boundary = scan.boundary.clone();
    out.infinite = infs
        .iter()
        .map(|e| InfiniteRecord {
            equilibrium: *e,
            f_value: field.radial_coeff(e.theta),
            stability: classify_infinite(field, e, tol),
        })
        .collect();
    out.finite = scan.equilibria.clone();
    let counts = check_counts(field, &infs, &scan.equilibria);
    for v in counts.violations() {
        out.consistency_failures.push(v.to_string());
    }
    out.counts = Some(counts);

    if infs.is_empty() {
        if field.degree().is_multiple_of(2) {
            out.consistency_failures
                .push("even degree but no infinite equilibria found".into());
        }
        let crit = cycle_integral(field, tol);
        if crit.guard_failed {
            out.warnings.push(format!(
                "min |g| = {:.3e} on the guard grid is below {:.1e}; the criterion integral is ill-conditioned",
                crit.min_abs_g, tol.guard_min_g
            ));
        }
        if crit.boundary {
            out.warnings.push(format!(
                "criterion integral {:.3e} is zero to tolerance: non-hyperbolic boundary",
                crit.integral
            ));
        }
        out.cycle = Some(crit);
        if crit.cycle_exists {
            out.verdict = Verdict::LimitCycle;
        } else if let Some(g) = global_attractor_test(field, &infs, Some(&crit), tol) {
            out.verdict = global_verdict(&g);
            out.global = Some(g);
        }
        return out;
    }

    match cones(&infs) {
        Ok(geoms) => {
            for geom in &geoms {
                match classify_sectors(field, geom, tol) {
                    Ok(c) => out.cones.push(c),
                    Err(e) => out.consistency_failures.push(e.to_string()),
                }
            }
        }
        Err(e) => out.consistency_failures.push(e.to_string()),
    }

    if let Some(pc) = polycycle_test(field, &infs, &scan.equilibria, tol) {
        out.verdict = match pc.kind {
            PolycycleKind::Polycycle => Verdict::Polycycle,
            PolycycleKind::HeteroclinicCycle => Verdict::HeteroclinicCycle,
        };
        out.polycycle = Some(pc);
    } else if let Some(g) = global_attractor_test(field, &infs, None, tol) {
        out.verdict = global_verdict(&g);
        out.global = Some(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn field(lambda: f64, q1: &[f64], q2: &[f64]) -> StarField {
        StarField::from_coeffs(lambda, q1.to_vec(), q2.to_vec()).unwrap()
    }

    fn hetero() -> StarField {
        field(1.0, &[0.0, 0.0, -1.0, 0.0], &[1.0, 0.0, 0.0, -1.0])
    }

    fn eps_field(lambda: f64, eps: f64) -> StarField {
        // Q = (−εx(x²+y²) − y(x²+y²), −εy(x²+y²) + x(x²+y²))
        field(lambda, &[-eps, -1.0, -eps, -1.0], &[1.0, -eps, 1.0, -eps])
    }

    #[test]
    fn two_antipodal_zeros_give_two_cones() {
        let infs = infinite_equilibria(&hetero(), &tol()).unwrap();
        let cs = cones(&infs).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!((cs[0].start.theta, cs[0].theta2), (FRAC_PI_2, 3.0 * FRAC_PI_2));
        assert_eq!((cs[1].start.theta, cs[1].theta2), (3.0 * FRAC_PI_2, FRAC_PI_2 + TAU));
        assert_eq!(cones(&[]), Err(PortraitError::NoInfiniteEquilibria));
    }

    #[test]
    fn heteroclinic_fixture_sectors_are_case_d() {
        let f = hetero();
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        for geom in cones(&infs).unwrap() {
            let c = classify_sectors(&f, &geom, &tol()).unwrap();
            assert_eq!(c.g_sign_inside, 1);
            assert_eq!(c.flow_pair(), (SectorType::PMinus, SectorType::HMinus));
            assert_eq!(c.case_tag, CaseTag::D);
        }
    }

    #[test]
    fn xx_yy_first_cone_is_attracting_at_both_ends() {
        let f = field(1.0, &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]);
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        let c = classify_sectors(&f, &cones(&infs).unwrap()[0], &tol()).unwrap();
        assert!((c.theta2 - PI / 4.0).abs() < 1e-12);
        // g(π/8) = cos sin (sin − cos) < 0: flow from π/4 toward 0.
        assert_eq!(c.g_sign_inside, -1);
        assert_eq!(c.case_tag, CaseTag::C);
    }

    #[test]
    fn epsilon_field_has_cycle_with_integral_minus_two_pi() {
        let c = limit_cycle_test(&eps_field(1.0, 1.0), &tol()).unwrap();
        assert!((c.integral + TAU).abs() < 1e-8);
        assert!(c.cycle_exists && c.hyperbolic && !c.boundary);
        let p = assemble_portrait(&eps_field(1.0, 1.0), &tol());
        assert_eq!(p.verdict, Verdict::LimitCycle);
        assert!(p.cones.is_empty());
    }

    #[test]
    fn cubic_rotation_is_a_boundary_repellor() {
        let f = field(1.0, &[0.0, 0.0, 0.0, -1.0], &[1.0, 0.0, 0.0, 0.0]);
        let c = limit_cycle_test(&f, &tol()).unwrap();
        assert!(c.integral.abs() < 1e-8);
        assert!(c.boundary && !c.cycle_exists);
        let p = assemble_portrait(&f, &tol());
        assert_eq!(p.verdict, Verdict::GlobalRepellor);
        assert!(p.warnings.iter().any(|w| w.contains("non-hyperbolic boundary")));
    }

    #[test]
    fn criterion_preconditions() {
        let even = field(1.0, &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]);
        assert_eq!(limit_cycle_test(&even, &tol()), Err(CycleTestError::EvenDegree));
        assert_eq!(limit_cycle_test(&hetero(), &tol()), Err(CycleTestError::HasInfiniteEquilibria));
    }

    #[test]
    fn quadrature_tolerance_halving_is_stable() {
        for f in [eps_field(1.0, 1.0), eps_field(4.0, 0.3), hetero().perturbed(0.1).unwrap()] {
            let a = cycle_integral(&f, &tol());
            let fine = Tolerances {
                quad: tol().quad / 2.0,
                ..tol()
            };
            let b = cycle_integral(&f, &fine);
            assert!((a.integral - b.integral).abs() < 1e-7);
        }
    }

    #[test]
    fn heteroclinic_fixture_portrait() {
        let p = assemble_portrait(&hetero(), &tol());
        assert_eq!(p.verdict, Verdict::HeteroclinicCycle);
        assert!(p.polycycle.unwrap().attracting);
        assert_eq!(p.cones.len(), 2);
        assert!(p.cones.iter().all(|c| c.case_tag == CaseTag::D));
        assert!(p.consistency_failures.is_empty());
        assert!(global_attractor_test(&hetero(), &p.infinite_equilibria(), None, &tol()).is_none());
    }

    #[test]
    fn polycycle_needs_odd_degree_and_inner_equilibria() {
        let even = field(1.0, &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]);
        let infs = infinite_equilibria(&even, &tol()).unwrap();
        assert!(polycycle_test(&even, &infs, &[], &tol()).is_none());
        // λ = −1 on the fixture: λf > 0 at both zeros.
        let f = hetero().with_lambda(-1.0).unwrap();
        let infs = infinite_equilibria(&f, &tol()).unwrap();
        assert!(polycycle_test(&f, &infs, &[], &tol()).is_none());
        assert_eq!(assemble_portrait(&f, &tol()).verdict, Verdict::GlobalAttractor);
    }

    #[test]
    fn degenerate_cases() {
        let t = tol();
        let sphere = field(1.0, &[1.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 1.0]);
        let p = assemble_portrait(&sphere, &t);
        assert_eq!(p.verdict, Verdict::DegenerateContinuum);
        let c = p.continuum.unwrap();
        assert!(c.origin_only);
        assert_eq!(c.degenerate_case, Some(DegenerateCase::A));

        let neg = field(1.0, &[-1.0, 0.0, -1.0, 0.0], &[0.0, -1.0, 0.0, -1.0]);
        let c = assemble_portrait(&neg, &t).continuum.unwrap();
        assert_eq!(c.degenerate_case, Some(DegenerateCase::B));
        assert!(c.full_circle);
        assert!((c.circle_radius.unwrap() - 1.0).abs() < 1e-12);

        let saddle = field(1.0, &[1.0, 0.0, -1.0, 0.0], &[0.0, 1.0, 0.0, -1.0]);
        let c = assemble_portrait(&saddle, &t).continuum.unwrap();
        assert_eq!(c.degenerate_case, Some(DegenerateCase::C));
        assert_eq!(c.arcs.len(), 2);
    }

    #[test]
    fn degenerate_case_table() {
        assert_eq!(degenerate_case(1.0, 0.0, 1.0, 1.0), Some(DegenerateCase::A));
        assert_eq!(degenerate_case(-1.0, 0.0, -1.0, 1.0), Some(DegenerateCase::B));
        assert_eq!(degenerate_case(1.0, 0.0, -1.0, 1.0), Some(DegenerateCase::C));
        assert_eq!(degenerate_case(1.0, 2.0, 1.0, 1.0), Some(DegenerateCase::D));
        assert_eq!(degenerate_case(-1.0, 2.0, -1.0, 1.0), Some(DegenerateCase::E));
        assert_eq!(degenerate_case(1.0, 0.0, 1.0, -1.0), Some(DegenerateCase::B));
    }
}
