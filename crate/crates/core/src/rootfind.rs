//! Simultaneous root finding by Ehrlich-Aberth iteration with Newton polishing.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootFindConfig {
    /// Target for `|p(r)| / sum_k |a_k| |r|^k`.
    pub tol: f64,
    pub max_iter: usize,
    /// Seeds the rotation of the initial circle of guesses.
    pub seed: u64,
}

impl Default for RootFindConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200, seed: 0 }
    }
}

impl RootFindConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Roots together with solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    /// Largest `|p(r)| / scale(p, r)` over the returned roots.
    pub max_residual_ratio: f64,
    /// Smallest pairwise distance between returned roots; small values mark
    /// clusters (multiple roots are accepted, not certified).
    pub min_separation: f64,
}

fn residual_ratio(p: &Polynomial, z: Complex64) -> f64 {
    let v = p.eval(z).norm();
    if v == 0.0 {
        return 0.0;
    }
    let scale = p.eval_scale(z);
    if scale == 0.0 {
        f64::INFINITY
    } else {
        v / scale
    }
}

/// Lexicographic `(re, im)` order.
pub fn sort_lexicographic(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn min_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}

/// Up to five Newton steps, keeping only improvements of `|p(z)|`.
pub fn polish_root(p: &Polynomial, z0: Complex64) -> Complex64 {
    let mut best = z0;
    let mut best_val = p.eval(z0).norm();
    let mut z = z0;
    for _ in 0..5 {
        if best_val == 0.0 {
            break;
        }
        let (v, d) = p.eval_with_derivative(z);
        if d.norm() == 0.0 || !d.re.is_finite() || !d.im.is_finite() {
            break;
        }
        let next = z - v / d;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        let next_val = p.eval(next).norm();
        if next_val < best_val {
            best = next;
            best_val = next_val;
            z = next;
        } else {
            break;
        }
    }
    best
}

fn aberth(p: &Polynomial, cfg: &RootFindConfig) -> Result<(Vec<Complex64>, usize)> {
    let n = p.degree();
    if n == 1 {
        let c = p.coeffs();
        return Ok((vec![-c[0] / c[1]], 0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let phase: f64 = rng.gen_range(0.0..TAU);
    let radius = p.cauchy_bound();
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, phase + TAU * k as f64 / n as f64)).collect();
    let mut done = vec![false; n];
    let mut iterations = 0;

    for iter in 0..cfg.max_iter {
        iterations = iter + 1;
        let mut active = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (v, d) = p.eval_with_derivative(zi);
            if v.norm() <= cfg.tol * p.eval_scale(zi) {
                done[i] = true;
                continue;
            }
            active = true;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    let diff = zi - zj;
                    if diff.norm() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let denom = d / v - repulsion;
            let step = if denom.norm() > 0.0 && denom.re.is_finite() && denom.im.is_finite() {
                denom.inv()
            } else {
                // Stalled on a critical point or a colliding pair: nudge.
                Complex64::from_polar(1e-8 * radius.max(zi.norm()), rng.gen_range(0.0..TAU))
            };
            z[i] = zi - step;
        }
        if !active {
            break;
        }
    }

    let worst = z.iter().map(|&r| residual_ratio(p, r)).fold(0.0, f64::max);
    if !(worst <= cfg.tol) {
        return Err(Error::NoConvergence { iterations, residual: worst });
    }
    Ok((z, iterations))
}

/// All roots with diagnostics. Exact zero roots (vanishing low-order
/// coefficients) are split off before iterating.
pub fn find_roots_detailed(p: &Polynomial, cfg: &RootFindConfig) -> Result<RootReport> {
    cfg.validate()?;
    if p.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let zeros = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = Polynomial::new(p.coeffs()[zeros..].to_vec())?;

    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let mut iterations = 0;
    if reduced.degree() > 0 {
        let (found, iters) = aberth(&reduced, cfg)?;
        iterations = iters;
        roots.extend(found.into_iter().map(|r| polish_root(&reduced, r)));
    }
    sort_lexicographic(&mut roots);
    let max_residual_ratio = roots.iter().map(|&r| residual_ratio(p, r)).fold(0.0, f64::max);
    Ok(RootReport { min_separation: min_separation(&roots), roots, iterations, max_residual_ratio })
}

/// All `degree(p)` roots with multiplicity, sorted lexicographically.
pub fn find_roots(p: &Polynomial, cfg: &RootFindConfig) -> Result<Vec<Complex64>> {
    find_roots_detailed(p, cfg).map(|r| r.roots)
}

/// Roots of `p(z) - z`.
pub fn fixed_points(p: &Polynomial, cfg: &RootFindConfig) -> Result<Vec<Complex64>> {
    require_degree(p, 2)?;
    find_roots(&p.minus_identity(), cfg)
}

pub(crate) fn require_degree(p: &Polynomial, min: usize) -> Result<()> {
    if p.degree() < min {
        Err(Error::DegreeTooSmall { found: p.degree(), required: min })
    } else {
        Ok(())
    }
}
