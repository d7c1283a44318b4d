//! Dense complex polynomials in ascending-degree form.
//!
//! A [`Polynomial`] is always stored trimmed: the last coefficient is
//! nonzero relative to the largest coefficient, except for the zero
//! polynomial which is the single coefficient `0`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Leading coefficients at or below this fraction of the largest
/// coefficient magnitude are dropped.
pub const TRIM_RELATIVE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

pub(crate) fn check_finite(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

fn trim(coeffs: &mut Vec<Complex64>) {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        coeffs.clear();
        coeffs.push(Complex64::new(0.0, 0.0));
        return;
    }
    while coeffs.len() > 1 && coeffs[coeffs.len() - 1].norm() <= TRIM_RELATIVE * max {
        coeffs.pop();
    }
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming negligible
    /// leading terms. Rejects empty or non-finite input.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        for &c in &coeffs {
            check_finite(c, "polynomial coefficient")?;
        }
        let mut coeffs = coeffs;
        trim(&mut coeffs);
        Ok(Self { coeffs })
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0)] }
    }

    /// The identity map `z`.
    pub fn identity() -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut it = self.coeffs.iter().rev();
        let mut acc = *it.next().expect("polynomial is never empty");
        for &c in it {
            acc = acc * z + c;
        }
        acc
    }

    /// `p(z)` and `p'(z)` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut it = self.coeffs.iter().rev();
        let mut value = *it.next().expect("polynomial is never empty");
        let mut deriv = Complex64::new(0.0, 0.0);
        for &c in it {
            deriv = deriv * z + value;
            value = value * z + c;
        }
        (value, deriv)
    }

    /// `sum_k |a_k| |z|^k`, the natural magnitude against which a computed
    /// value of `p(z)` is judged.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect();
        Self::new(coeffs).expect("derivative of a finite polynomial is finite")
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(zero) + other.coeffs.get(k).copied().unwrap_or(zero))
            .collect();
        Self::new(coeffs).expect("sum of finite polynomials")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect()).expect("scaled polynomial is finite")
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out).expect("product of finite polynomials")
    }

    /// `p(z) - z`, whose roots are the fixed points of `p`.
    pub fn minus_identity(&self) -> Self {
        self.sub(&Self::identity())
    }

    /// Cauchy root bound `1 + max_k |a_k / a_n|`.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading().norm();
        if self.degree() == 0 || lead == 0.0 {
            return 1.0;
        }
        let m = self.coeffs[..self.degree()].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
        1.0 + m
    }

    /// `leading * prod (z - r_i)` expanded.
    pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> Result<Self> {
        check_finite(leading, "leading coefficient")?;
        let mut coeffs = vec![leading];
        for &r in roots {
            check_finite(r, "root")?;
            coeffs.push(Complex64::new(0.0, 0.0));
            for k in (1..coeffs.len()).rev() {
                let prev = coeffs[k - 1];
                coeffs[k] = prev - r * coeffs[k];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Self::new(coeffs)
    }

    /// `c * prod (z - root_i) + z`: every `root_i` is a fixed point.
    pub fn from_fixed_point_form(c: Complex64, roots: &[Complex64]) -> Result<Self> {
        check_finite(c, "leading factor")?;
        if c == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroLeadingFactor);
        }
        Ok(Self::from_roots(c, roots)?.add(&Self::identity()))
    }

    /// `(-z^{n+1} + (n+1) z) / n`. Its fixed points are `0` and the n-th
    /// roots of unity, the latter all superattracting.
    pub fn exemplar_family(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegreeTooSmall { found: n, required: 2 });
        }
        let nf = n as f64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 2];
        coeffs[1] = Complex64::new((nf + 1.0) / nf, 0.0);
        coeffs[n + 1] = Complex64::new(-1.0 / nf, 0.0);
        Self::new(coeffs)
    }
}
