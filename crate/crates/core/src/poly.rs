//! Homogeneous bivariate polynomials and the star-node field built on them.
//!
//! Coefficients of a degree-`n` homogeneous polynomial are stored as
//! `c_0..c_n` with `c_k` multiplying `x^(n-k) y^k`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Tolerances;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("a homogeneous polynomial needs at least one coefficient")]
    EmptyCoefficients,
    #[error("lambda must be a nonzero finite real, got {0}")]
    BadLambda(f64),
    #[error("Q1 and Q2 must share the same degree (got {0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("the nonlinearity must have degree n > 1, got {0}")]
    DegreeTooLow(usize),
    #[error("Q1 and Q2 are both identically zero")]
    ZeroNonlinearity,
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
}

/// Homogeneous polynomial `sum_k c_k x^(n-k) y^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HomogeneousPoly {
    coeffs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for HomogeneousPoly {
    type Error = FieldError;

    fn try_from(coeffs: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(coeffs)
    }
}

impl From<HomogeneousPoly> for Vec<f64> {
    fn from(p: HomogeneousPoly) -> Self {
        p.coeffs
    }
}

impl HomogeneousPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, FieldError> {
        if coeffs.is_empty() {
            return Err(FieldError::EmptyCoefficients);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(FieldError::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![0.0; degree + 1],
        }
    }

    /// `c · x^(n-k) y^k`.
    pub fn monomial(degree: usize, k: usize, c: f64) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[k] = c;
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.abs() <= tol)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let n = self.degree();
        let mut xp = vec![1.0; n + 1];
        let mut yp = vec![1.0; n + 1];
        for i in 1..=n {
            xp[i] = xp[i - 1] * x;
            yp[i] = yp[i - 1] * y;
        }
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * xp[n - k] * yp[k])
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Sum of two polynomials of equal degree.
    ///
    /// Panics if the degrees differ.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in add");
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Product with `x`.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(0.0);
        Self { coeffs }
    }

    /// Product with `y`.
    pub fn mul_y(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn partial_x(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (0..n)
                .map(|k| self.coeffs[k] * (n - k) as f64)
                .collect(),
        }
    }

    pub fn partial_y(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (0..n)
                .map(|k| self.coeffs[k + 1] * (k + 1) as f64)
                .collect(),
        }
    }

    /// `x ∂P/∂y − y ∂P/∂x`, so that `d/dθ P(cosθ, sinθ)` equals this
    /// polynomial evaluated at `(cosθ, sinθ)`.
    pub fn angular_derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero(0);
        }
        self.partial_y().mul_x().sub(&self.partial_x().mul_y())
    }

    /// `P(1, u)` as a polynomial in `u`.
    pub fn at_x_one(&self) -> Poly1D {
        Poly1D::new(self.coeffs.clone())
    }

    /// `P(u, 1)` as a polynomial in `u`.
    pub fn at_y_one(&self) -> Poly1D {
        Poly1D::new(self.coeffs.iter().rev().copied().collect())
    }
}

/// Polynomial in one variable, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly1D {
    coeffs: Vec<f64>,
}

impl Poly1D {
    /// Builds the polynomial, dropping exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.abs() <= tol)
    }

    /// Copy with every coefficient of magnitude `<= tol` set to zero.
    pub fn cleaned(&self, tol: f64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() <= tol { 0.0 } else { c })
                .collect(),
        )
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

/// The field `(λx + Q1, λy + Q2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarField {
    lambda: f64,
    q1: HomogeneousPoly,
    q2: HomogeneousPoly,
}

impl StarField {
    pub fn new(lambda: f64, q1: HomogeneousPoly, q2: HomogeneousPoly) -> Result<Self, FieldError> {
        if !lambda.is_finite() || lambda == 0.0 {
            return Err(FieldError::BadLambda(lambda));
        }
        if q1.degree() != q2.degree() {
            return Err(FieldError::DegreeMismatch(q1.degree(), q2.degree()));
        }
        if q1.degree() < 2 {
            return Err(FieldError::DegreeTooLow(q1.degree()));
        }
        if q1.is_zero(0.0) && q2.is_zero(0.0) {
            return Err(FieldError::ZeroNonlinearity);
        }
        Ok(Self { lambda, q1, q2 })
    }

    /// Convenience constructor from raw coefficient vectors.
    pub fn from_coeffs(lambda: f64, q1: Vec<f64>, q2: Vec<f64>) -> Result<Self, FieldError> {
        Self::new(lambda, HomogeneousPoly::new(q1)?, HomogeneousPoly::new(q2)?)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn q1(&self) -> &HomogeneousPoly {
        &self.q1
    }

    pub fn q2(&self) -> &HomogeneousPoly {
        &self.q2
    }

    pub fn degree(&self) -> usize {
        self.q1.degree()
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self, FieldError> {
        Self::new(lambda, self.q1.clone(), self.q2.clone())
    }

    /// `max(1, max |coefficient of Q|)`.
    pub fn coeff_scale(&self) -> f64 {
        1f64.max(self.q1.max_abs()).max(self.q2.max_abs())
    }

    /// Absolute zero threshold for coefficients derived from this field.
    pub fn zero_threshold(&self, tol: &Tolerances) -> f64 {
        tol.zero_coeff * self.coeff_scale()
    }

    pub fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        [
            self.lambda * x + self.q1.eval(x, y),
            self.lambda * y + self.q2.eval(x, y),
        ]
    }

    pub fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        [
            [
                self.lambda + self.q1.partial_x().eval(x, y),
                self.q1.partial_y().eval(x, y),
            ],
            [
                self.q2.partial_x().eval(x, y),
                self.lambda + self.q2.partial_y().eval(x, y),
            ],
        ]
    }

    /// `x Q2 − y Q1`; its restriction to the unit circle is `g(θ)`.
    pub fn angular_form(&self) -> HomogeneousPoly {
        self.q2.mul_x().sub(&self.q1.mul_y())
    }

    /// `x Q1 + y Q2`; its restriction to the unit circle is `f(θ)`.
    pub fn radial_form(&self) -> HomogeneousPoly {
        self.q1.mul_x().add(&self.q2.mul_y())
    }

    /// `F(u) = Q2(1, u) − u Q1(1, u)`, the equator dynamics in chart U1.
    pub fn u1_polynomial(&self) -> Poly1D {
        self.angular_form().at_x_one()
    }

    /// `G(u) = Q1(u, 1) − u Q2(u, 1)`, the equator dynamics in chart U2.
    pub fn u2_polynomial(&self) -> Poly1D {
        self.angular_form().at_y_one().scale(-1.0)
    }

    /// `f(θ) = cosθ Q1(cosθ, sinθ) + sinθ Q2(cosθ, sinθ)`.
    pub fn radial_coeff(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        c * self.q1.eval(c, s) + s * self.q2.eval(c, s)
    }

    /// `g(θ) = cosθ Q2(cosθ, sinθ) − sinθ Q1(cosθ, sinθ)`.
    pub fn angular_coeff(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        c * self.q2.eval(c, s) - s * self.q1.eval(c, s)
    }

    /// `d^order g / dθ^order`, from the polynomial form of `g`.
    pub fn angular_coeff_derivative(&self, theta: f64, order: usize) -> f64 {
        let mut p = self.angular_form();
        for _ in 0..order {
            p = p.angular_derivative();
        }
        let (s, c) = theta.sin_cos();
        p.eval(c, s)
    }

    pub fn radial_coeff_derivative(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.radial_form().angular_derivative().eval(c, s)
    }

    /// Upper bound for `max |f|` on the circle (sum of coefficient moduli).
    pub fn radial_coeff_bound(&self) -> f64 {
        self.radial_form().abs_sum()
    }

    /// Threshold under which `|f(θ0)|` is treated as zero.
    pub fn f_zero_threshold(&self, tol: &Tolerances) -> f64 {
        tol.f_zero * (1.0 + self.radial_coeff_bound())
    }

    /// When `y Q1 = x Q2`, returns `p` with `Q1 = x p` and `Q2 = y p`.
    ///
    /// Compared coefficient-wise with absolute tolerance
    /// `zero_coeff * coeff_scale`.
    pub fn degenerate_kernel(&self, tol: &Tolerances) -> Option<HomogeneousPoly> {
        let n = self.degree();
        let eps = self.zero_threshold(tol);
        let c = self.q1.coeffs();
        let d = self.q2.coeffs();
        if c[n].abs() > eps || d[0].abs() > eps {
            return None;
        }
        if (1..=n).any(|k| (d[k] - c[k - 1]).abs() > eps) {
            return None;
        }
        Some(HomogeneousPoly {
            coeffs: c[..n].to_vec(),
        })
    }

    /// Whether `Q1` and `Q2` share a real linear factor, decided as: some
    /// zero of `g` is also a zero of `f`.
    pub fn common_linear_factor(&self, tol: &Tolerances) -> bool {
        let f_tol = self.f_zero_threshold(tol);
        if let Some(kernel) = self.degenerate_kernel(tol) {
            // g ≡ 0 and f = (x² + y²) p on the circle: look for zeros of p.
            return crate::roots::circle_zeros(&kernel, tol)
                .map(|zs| !zs.is_empty())
                .unwrap_or(true);
        }
        match crate::roots::infinite_equilibria(self, tol) {
            Ok(infs) => infs
                .iter()
                .any(|e| self.radial_coeff(e.theta).abs() <= f_tol),
            Err(_) => true,
        }
    }

    /// `(Q1 − ε yⁿ, Q2 + ε xⁿ)` with the same λ.
    pub fn perturbed(&self, eps: f64) -> Result<Self, FieldError> {
        let n = self.degree();
        let q1 = self.q1.sub(&HomogeneousPoly::monomial(n, n, eps));
        let q2 = self.q2.add(&HomogeneousPoly::monomial(n, 0, eps));
        Self::new(self.lambda, q1, q2)
    }
}
