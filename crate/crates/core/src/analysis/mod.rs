//! Fixed-point classification, the collinear attractive bound, and the
//! multiplier margin `max Re p'(theta)` together with its exact low-degree
//! structure.

mod search;

pub use search::{
    conjecture_search, random_polynomial, sample_seed, SearchConfig, SearchReport, Strategy, ViolationInstance,
    HISTOGRAM_BINS, HISTOGRAM_MAX, VIOLATION_SLACK,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json::{complex, complex_vec};
use crate::poly::Polynomial;
use crate::rootfind::{fixed_points, RootFindConfig};

pub const DEFAULT_EPS_CLASS: f64 = 1e-9;
pub const DEFAULT_EPS_LINE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedPointClass {
    Attractive,
    Neutral,
    Repelling,
}

impl FixedPointClass {
    pub fn of_multiplier(multiplier: Complex64, eps_class: f64) -> Self {
        let m = multiplier.norm();
        if m < 1.0 - eps_class {
            Self::Attractive
        } else if m > 1.0 + eps_class {
            Self::Repelling
        } else {
            Self::Neutral
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointRecord {
    #[serde(with = "complex")]
    pub theta: Complex64,
    #[serde(with = "complex")]
    pub multiplier: Complex64,
    pub class: FixedPointClass,
    /// `|p(theta) - theta|`
    pub residual: f64,
}

impl FixedPointRecord {
    pub fn is_attractive(&self) -> bool {
        self.class == FixedPointClass::Attractive
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eps_class: f64,
    pub eps_line: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps_class: DEFAULT_EPS_CLASS, eps_line: DEFAULT_EPS_LINE }
    }
}

/// One record per fixed point (with multiplicity), sorted by `(re, im)`.
pub fn classify(p: &Polynomial, cfg: &RootFindConfig, eps_class: f64) -> Result<Vec<FixedPointRecord>> {
    let dp = p.derivative();
    Ok(fixed_points(p, cfg)?
        .into_iter()
        .map(|theta| {
            let multiplier = dp.eval(theta);
            FixedPointRecord {
                theta,
                multiplier,
                class: FixedPointClass::of_multiplier(multiplier, eps_class),
                residual: (p.eval(theta) - theta).norm(),
            }
        })
        .collect())
}

/// A line `point + t * direction`, `direction` of unit modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    #[serde(with = "complex")]
    pub point: Complex64,
    #[serde(with = "complex")]
    pub direction: Complex64,
}

impl Line {
    pub fn distance(&self, z: Complex64) -> f64 {
        ((z - self.point) * self.direction.conj()).im.abs()
    }
}

/// Largest subset of attractive points within `eps_line * spread` of one
/// line, by enumerating the lines through every pair.
pub fn max_collinear_attractive(records: &[FixedPointRecord], eps_line: f64) -> (usize, Option<Line>) {
    let pts: Vec<Complex64> = records.iter().filter(|r| r.is_attractive()).map(|r| r.theta).collect();
    max_collinear(&pts, eps_line)
}

pub fn max_collinear(pts: &[Complex64], eps_line: f64) -> (usize, Option<Line>) {
    let m = pts.len();
    if m <= 1 {
        return (m, None);
    }
    let mut spread: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            spread = spread.max((pts[i] - pts[j]).norm());
        }
    }
    if spread == 0.0 {
        return (m, Some(Line { point: pts[0], direction: Complex64::new(1.0, 0.0) }));
    }
    let tol = eps_line * spread;
    let mut best = (0, None);
    for i in 0..m {
        for j in i + 1..m {
            let d = pts[j] - pts[i];
            if d.norm() <= tol {
                continue;
            }
            let line = Line { point: pts[i], direction: d / d.norm() };
            let count = pts.iter().filter(|&&z| line.distance(z) <= tol).count();
            if count > best.0 {
                best = (count, Some(line));
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub degree: usize,
    pub records: Vec<FixedPointRecord>,
    pub attractive_count: usize,
    pub max_collinear_attractive: usize,
    /// `ceil(degree / 2)`
    pub bound: usize,
    pub satisfied: bool,
    pub witness_line: Option<Line>,
}

pub fn bound_from_records(degree: usize, records: Vec<FixedPointRecord>, eps_line: f64) -> BoundReport {
    let (count, witness_line) = max_collinear_attractive(&records, eps_line);
    let bound = degree.div_ceil(2);
    BoundReport {
        degree,
        attractive_count: records.iter().filter(|r| r.is_attractive()).count(),
        max_collinear_attractive: count,
        bound,
        satisfied: count <= bound,
        witness_line,
        records,
    }
}

pub fn check_half_bound(p: &Polynomial, cfg: &RootFindConfig, tol: &Tolerances) -> Result<BoundReport> {
    let records = classify(p, cfg, tol.eps_class)?;
    Ok(bound_from_records(p.degree(), records, tol.eps_line))
}

/// `max Re p'(theta)` over the fixed points; conjecturally at least 1.
pub fn conjecture_margin(p: &Polynomial, cfg: &RootFindConfig) -> Result<f64> {
    let dp = p.derivative();
    Ok(margin_at(&dp, &fixed_points(p, cfg)?))
}

pub(crate) fn margin_at(dp: &Polynomial, thetas: &[Complex64]) -> f64 {
    thetas.iter().map(|&t| dp.eval(t).re).fold(f64::NEG_INFINITY, f64::max)
}

/// Relative threshold below which two fixed points are considered equal.
pub const FIXED_POINT_SEPARATION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticIdentity {
    #[serde(with = "complex_vec")]
    pub fixed_points: Vec<Complex64>,
    #[serde(with = "complex_vec")]
    pub multipliers: Vec<Complex64>,
    /// `lambda_1 + lambda_2`, identically 2.
    #[serde(with = "complex")]
    pub sum: Complex64,
    pub ok: bool,
    pub margin: f64,
}

impl QuadraticIdentity {
    fn build(fps: [Complex64; 2], lambdas: [Complex64; 2], sum: Complex64, ok: bool) -> Self {
        Self {
            fixed_points: fps.to_vec(),
            multipliers: lambdas.to_vec(),
            sum,
            ok,
            margin: lambdas[0].re.max(lambdas[1].re),
        }
    }
}

/// Roots of `a z^2 + b z + c` by the cancellation-free quadratic formula.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let s = (b * b - 4.0 * a * c).sqrt();
    let q = if (b.conj() * s).re >= 0.0 { -(b + s) / 2.0 } else { -(b - s) / 2.0 };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// For a quadratic the two multipliers always sum to 2, so one of them has
/// real part at least 1.
pub fn quadratic_identity_check(p: &Polynomial) -> Result<QuadraticIdentity> {
    if p.degree() != 2 {
        return Err(Error::WrongDegree { expected: 2, found: p.degree() });
    }
    let c = p.coeffs();
    let one = Complex64::new(1.0, 0.0);
    let [z1, z2] = quadratic_roots(c[2], c[1] - one, c[0]);
    let sep = FIXED_POINT_SEPARATION * 1f64.max(z1.norm()).max(z2.norm());
    if (z1 - z2).norm() <= sep {
        return Err(Error::MultipleFixedPoint(sep));
    }
    let dp = p.derivative();
    let lambdas = [dp.eval(z1), dp.eval(z2)];
    let sum = lambdas[0] + lambdas[1];
    let scale = 1f64.max(c[2].norm() * (z1.norm() + z2.norm())).max(c[1].norm());
    let ok = (sum - 2.0).norm() <= 1e-9 * scale;
    let mut fps = [z1, z2];
    let mut lam = lambdas;
    if (z2.re, z2.im) < (z1.re, z1.im) {
        fps.swap(0, 1);
        lam.swap(0, 1);
    }
    Ok(QuadraticIdentity::build(fps, lam, sum, ok))
}

/// For `p(z) = c (z - z_1)(z - z_2)(z - z_3) + z` with `a^2 = c`:
/// `alpha_1 = a(z_1 - z_2)`, `alpha_2 = a(z_3 - z_1)`, `alpha_3 = a(z_2 - z_3)`,
/// and `lambda_1 = 1 - alpha_1 alpha_2`, `lambda_2 = 1 - alpha_2 alpha_3`,
/// `lambda_3 = 1 - alpha_3 alpha_1`.
///
/// `lambda_1 = p'(z_1)`, `lambda_2 = p'(z_3)`, `lambda_3 = p'(z_2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicDecomposition {
    #[serde(with = "complex")]
    pub a: Complex64,
    #[serde(with = "complex_vec")]
    pub alphas: Vec<Complex64>,
    #[serde(with = "complex_vec")]
    pub lambdas: Vec<Complex64>,
    /// `p'(z_1), p'(z_2), p'(z_3)` from the expanded polynomial.
    #[serde(with = "complex_vec")]
    pub multipliers: Vec<Complex64>,
    #[serde(with = "complex")]
    pub alpha_sum: Complex64,
    pub alpha_sum_ok: bool,
    pub lambdas_ok: bool,
    /// First pair `(i, j)` (0-based) with `Im(alpha_i) Im(alpha_j) >= 0`.
    pub nonnegative_pair: (usize, usize),
    /// Index into `lambdas` attaining the margin.
    pub witness_index: usize,
    /// `max Re lambda_i`
    pub margin: f64,
}

/// Fixed point `z_j` whose multiplier is `lambda_i`.
pub const LAMBDA_TO_FIXED_POINT: [usize; 3] = [0, 2, 1];

pub fn cubic_decomposition(c: Complex64, z1: Complex64, z2: Complex64, z3: Complex64) -> Result<CubicDecomposition> {
    if c.norm() == 0.0 {
        return Err(Error::ZeroLeadingFactor);
    }
    let zs = [z1, z2, z3];
    let spread = (z1 - z2).norm().max((z1 - z3).norm()).max((z2 - z3).norm());
    let threshold = (FIXED_POINT_SEPARATION * spread).max(1e-12);
    for i in 0..3 {
        for j in i + 1..3 {
            if (zs[i] - zs[j]).norm() < threshold {
                return Err(Error::NodesTooClose { i, j, threshold });
            }
        }
    }
    let a = c.sqrt();
    let alphas = [a * (z1 - z2), a * (z3 - z1), a * (z2 - z3)];
    let one = Complex64::new(1.0, 0.0);
    let lambdas = [one - alphas[0] * alphas[1], one - alphas[1] * alphas[2], one - alphas[2] * alphas[0]];
    let alpha_sum = alphas[0] + alphas[1] + alphas[2];
    let alpha_scale = alphas.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let alpha_sum_ok = alpha_sum.norm() <= 1e-12 * alpha_scale.max(f64::MIN_POSITIVE);

    let p = Polynomial::from_fixed_point_form(c, &zs)?;
    let dp = p.derivative();
    let multipliers: Vec<Complex64> = zs.iter().map(|&z| dp.eval(z)).collect();
    let lambdas_ok = (0..3).all(|i| {
        let z = zs[LAMBDA_TO_FIXED_POINT[i]];
        let scale = dp.eval_scale(z).max(1.0);
        (lambdas[i] - multipliers[LAMBDA_TO_FIXED_POINT[i]]).norm() <= 1e-9 * scale
    });

    let pairs = [(0, 1), (0, 2), (1, 2)];
    let nonnegative_pair =
        *pairs.iter().find(|&&(i, j)| alphas[i].im * alphas[j].im >= 0.0).expect("among three reals two share a sign");
    let mut witness_index = 0;
    for i in 1..3 {
        if lambdas[i].re > lambdas[witness_index].re {
            witness_index = i;
        }
    }
    Ok(CubicDecomposition {
        a,
        alphas: alphas.to_vec(),
        lambdas: lambdas.to_vec(),
        multipliers,
        alpha_sum,
        alpha_sum_ok,
        lambdas_ok,
        nonnegative_pair,
        witness_index,
        margin: lambdas[witness_index].re,
    })
}
