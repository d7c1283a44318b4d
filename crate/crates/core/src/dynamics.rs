//! Orbits of `x -> p(x)`: local convergence rates, critical orbits and
//! basin rasters.

use std::collections::{BTreeMap, VecDeque};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{classify, FixedPointRecord, DEFAULT_EPS_CLASS};
use crate::error::{Error, Result};
use crate::json::{complex, complex_vec};
use crate::poly::Polynomial;
use crate::rootfind::{find_roots, polish_root, require_degree, RootFindConfig};

pub const DEFAULT_CONV_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_STEPS: usize = 10_000;
/// Orbits longer than this keep only their last [`ORBIT_TAIL`] points.
pub const ORBIT_CAP: usize = 10_000;
pub const ORBIT_TAIL: usize = 16;
/// `|p'(theta)|` at or below this counts as superattracting.
pub const SUPERATTRACTIVE: f64 = 1e-8;

/// `2 (1 + cauchy_bound(p(z) - z))`; orbits leaving this disk never return.
pub fn default_escape_radius(p: &Polynomial) -> f64 {
    2.0 * (1.0 + p.minus_identity().cauchy_bound())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OrbitStatus {
    Converged {
        #[serde(with = "complex")]
        to: Complex64,
    },
    Escaped,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orbit {
    /// Stored iterates; `points[0]` is `x_{first_index}`.
    #[serde(with = "complex_vec")]
    pub points: Vec<Complex64>,
    pub first_index: usize,
    pub status: OrbitStatus,
    pub steps: usize,
}

impl Orbit {
    pub fn last(&self) -> Complex64 {
        self.points[self.points.len() - 1]
    }

    pub fn converged_to(&self) -> Option<Complex64> {
        match self.status {
            OrbitStatus::Converged { to } => Some(to),
            _ => None,
        }
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Iterates until consecutive points are within `conv_tol`, the orbit leaves
/// the disk of radius `escape_radius`, or `max_steps` maps have been applied.
pub fn iterate(p: &Polynomial, x0: Complex64, max_steps: usize, conv_tol: f64, escape_radius: f64) -> Result<Orbit> {
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    if !(conv_tol > 0.0) || !(escape_radius > 0.0) {
        return Err(Error::InvalidArgument("conv_tol and escape_radius must be positive".into()));
    }
    crate::poly::check_finite(x0, "seed")?;

    let mut points = VecDeque::from([x0]);
    let mut first_index = 0;
    let finish = |points: VecDeque<Complex64>, first_index, status, steps| Orbit {
        points: points.into(),
        first_index,
        status,
        steps,
    };
    if x0.norm() > escape_radius {
        return Ok(finish(points, 0, OrbitStatus::Escaped, 0));
    }
    let mut x = x0;
    for k in 1..=max_steps {
        let next = p.eval(x);
        points.push_back(next);
        if points.len() > ORBIT_CAP {
            while points.len() > ORBIT_TAIL {
                points.pop_front();
                first_index += 1;
            }
        } else if first_index > 0 && points.len() > ORBIT_TAIL {
            points.pop_front();
            first_index += 1;
        }
        if !finite(next) || next.norm() > escape_radius {
            return Ok(finish(points, first_index, OrbitStatus::Escaped, k));
        }
        if (next - x).norm() <= conv_tol {
            return Ok(finish(points, first_index, OrbitStatus::Converged { to: next }, k));
        }
        x = next;
    }
    Ok(finish(points, first_index, OrbitStatus::Exhausted, max_steps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRate {
    /// Geometric mean of `|x_{k+1} - theta| / |x_k - theta|`; 0 when superattracting.
    pub rate: f64,
    pub superattractive: bool,
    pub ratios_used: usize,
}

/// Empirical linear rate of the orbit of `x0` towards the fixed point `theta`,
/// from the last (up to five) steps before the error reaches
/// `1e-14 max(1, |theta|)`. `theta` is first refined by Newton's method.
pub fn convergence_rate(p: &Polynomial, theta: Complex64, x0: Complex64, steps: usize) -> Result<ConvergenceRate> {
    let scale = theta.norm().max(1.0);
    let residual = (p.eval(theta) - theta).norm();
    if !(residual <= 1e-9 * scale) {
        return Err(Error::NotAFixedPoint(residual));
    }
    let g = p.minus_identity();
    let theta = if g.is_zero() { theta } else { polish_root(&g, theta) };
    // Iterate w = x - theta with the constant term dropped, so rounding error
    // is relative to |w| and the orbit can be followed far below the
    // absolute accuracy of p(x).
    let mut shifted = taylor_shift(p.coeffs(), theta);
    shifted[0] = Complex64::new(0.0, 0.0);
    let floor = 1e-14 * scale;
    let escape = default_escape_radius(p).max(2.0 * x0.norm());
    let mut w = x0 - theta;
    let mut errors = vec![w.norm()];
    for _ in 0..steps {
        w = shifted.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a);
        let e = w.norm();
        if !finite(w) || (theta + w).norm() > escape {
            return Err(Error::DidNotConverge);
        }
        errors.push(e);
        if e <= floor {
            break;
        }
    }
    let last = errors[errors.len() - 1];
    if !(last < errors[0]) {
        return Err(Error::DidNotConverge);
    }
    if shifted.get(1).map_or(0.0, |a| a.norm()) <= SUPERATTRACTIVE {
        return Ok(ConvergenceRate { rate: 0.0, superattractive: true, ratios_used: 0 });
    }
    let ratios: Vec<f64> = errors.windows(2).filter(|w| w[1] > floor && w[0] > 0.0).map(|w| w[1] / w[0]).collect();
    if ratios.is_empty() {
        return Err(Error::DidNotConverge);
    }
    let tail = &ratios[ratios.len().saturating_sub(5)..];
    let rate = (tail.iter().map(|r| r.ln()).sum::<f64>() / tail.len() as f64).exp();
    Ok(ConvergenceRate { rate, superattractive: false, ratios_used: tail.len() })
}

/// Coefficients of `p(theta + w) - theta` in powers of `w`.
fn taylor_shift(coeffs: &[Complex64], theta: Complex64) -> Vec<Complex64> {
    let mut q = coeffs.to_vec();
    let n = q.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let hi = q[j + 1];
            q[j] += theta * hi;
        }
    }
    if let Some(c0) = q.first_mut() {
        *c0 -= theta;
    }
    q
}

/// True when `|q(w) - q(0)| < |w|` for every `|w| <= r`, `q` being the
/// expansion of `p` around a fixed point. The disk of radius `r` is then
/// mapped into itself and every orbit in it converges to the fixed point.
fn contracts(q: &[Complex64], r: f64) -> bool {
    let bound: f64 = q.iter().skip(1).rev().fold(0.0, |acc, a| acc * r + a.norm());
    bound < 1.0 - 1e-9
}

/// The `degree(p) - 1` roots of `p'`.
pub fn critical_points(p: &Polynomial, cfg: &RootFindConfig) -> Result<Vec<Complex64>> {
    require_degree(p, 2)?;
    find_roots(&p.derivative(), cfg)
}

/// Radius within which a converged orbit is attributed to an attractive
/// fixed point. The last step `s` of a linearly converging orbit leaves it
/// about `|lambda| s / (1 - |lambda|)` away from the limit.
pub fn match_radius(record: &FixedPointRecord, conv_tol: f64) -> f64 {
    let gap = (1.0 - record.multiplier.norm()).max(1e-12);
    10.0 * conv_tol * (1.0 / gap).max(1.0)
}

/// Index of the attractive fixed point an orbit limit belongs to.
pub fn match_fixed_point(attractive: &[FixedPointRecord], z: Complex64, conv_tol: f64) -> Option<usize> {
    attractive
        .iter()
        .enumerate()
        .map(|(i, r)| (i, (r.theta - z).norm()))
        .filter(|&(i, d)| d <= match_radius(&attractive[i], conv_tol))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub degree: usize,
    pub attractive: Vec<FixedPointRecord>,
    #[serde(with = "complex_vec")]
    pub critical_points: Vec<Complex64>,
    /// For each critical point, the attractive fixed point its orbit reaches.
    pub critical_limits: Vec<Option<usize>>,
    /// Attractive fixed point index to the critical points covering it.
    pub coverage: BTreeMap<usize, Vec<usize>>,
    pub uncovered: Vec<usize>,
    pub all_covered: bool,
    pub attractive_count: usize,
    /// `attractive_count <= degree - 1`
    pub within_critical_bound: bool,
}

pub fn critical_orbit_coverage(p: &Polynomial, cfg: &RootFindConfig, max_steps: usize) -> Result<CoverageReport> {
    require_degree(p, 2)?;
    let attractive: Vec<FixedPointRecord> =
        classify(p, cfg, DEFAULT_EPS_CLASS)?.into_iter().filter(|r| r.is_attractive()).collect();
    let crit = critical_points(p, cfg)?;
    let escape = default_escape_radius(p);
    let expansions: Vec<Vec<Complex64>> = attractive.iter().map(|r| taylor_shift(p.coeffs(), r.theta)).collect();
    let critical_limits: Vec<Option<usize>> = crit
        .par_iter()
        .map(|&c| {
            let orbit = iterate(p, c, max_steps, DEFAULT_CONV_TOL, escape)?;
            Ok(match orbit.status {
                OrbitStatus::Converged { to } => match_fixed_point(&attractive, to, DEFAULT_CONV_TOL),
                // Slow convergence near a weakly attracting point.
                OrbitStatus::Exhausted => {
                    attractive.iter().zip(&expansions).position(|(r, q)| contracts(q, (orbit.last() - r.theta).norm()))
                }
                OrbitStatus::Escaped => None,
            })
        })
        .collect::<Result<_>>()?;
    let mut coverage: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, limit) in critical_limits.iter().enumerate() {
        if let Some(fi) = limit {
            coverage.entry(*fi).or_default().push(ci);
        }
    }
    let uncovered: Vec<usize> = (0..attractive.len()).filter(|i| !coverage.contains_key(i)).collect();
    let degree = p.degree();
    Ok(CoverageReport {
        degree,
        attractive_count: attractive.len(),
        within_critical_bound: attractive.len() < degree,
        all_covered: uncovered.is_empty(),
        attractive,
        critical_points: crit,
        critical_limits,
        coverage,
        uncovered,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    #[serde(with = "complex")]
    pub center: Complex64,
    /// Half the real-axis extent; the imaginary extent follows the aspect ratio.
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum PixelLabel {
    Fixed(usize),
    Escape,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinConfig {
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub max_steps: usize,
    pub conv_tol: f64,
    /// Worker threads; 0 means available parallelism.
    pub workers: usize,
    pub rootfind: RootFindConfig,
}

impl BasinConfig {
    pub fn new(window: Window, width: usize, height: usize) -> Self {
        Self {
            window,
            width,
            height,
            max_steps: DEFAULT_MAX_STEPS,
            conv_tol: DEFAULT_CONV_TOL,
            workers: 0,
            rootfind: RootFindConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinImage {
    pub width: usize,
    pub height: usize,
    pub window: Window,
    /// The attractive fixed points that `PixelLabel::Fixed` indexes.
    pub fixed_points: Vec<FixedPointRecord>,
    /// Row-major, row 0 at the top (largest imaginary part).
    pub labels: Vec<PixelLabel>,
    pub iterations: Vec<usize>,
}

/// Label colors, cycled when there are more than twelve attractive points.
pub const PALETTE: [[u8; 3]; 12] = [
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [250, 190, 212],
    [0, 128, 128],
    [170, 110, 40],
];
pub const ESCAPE_COLOR: [u8; 3] = [0, 0, 0];
pub const OTHER_COLOR: [u8; 3] = [255, 255, 255];

pub fn label_color(label: PixelLabel) -> [u8; 3] {
    match label {
        PixelLabel::Fixed(i) => PALETTE[i % PALETTE.len()],
        PixelLabel::Escape => ESCAPE_COLOR,
        PixelLabel::Other => OTHER_COLOR,
    }
}

impl Window {
    /// Center of pixel `(col, row)` in a `width x height` raster.
    pub fn pixel_center(&self, col: usize, row: usize, width: usize, height: usize) -> Complex64 {
        let half_height = self.half_width * height as f64 / width as f64;
        let x = (2.0 * (col as f64 + 0.5) / width as f64 - 1.0) * self.half_width;
        let y = (1.0 - 2.0 * (row as f64 + 0.5) / height as f64) * half_height;
        self.center + Complex64::new(x, y)
    }
}

pub fn render_basins(p: &Polynomial, cfg: &BasinConfig) -> Result<BasinImage> {
    require_degree(p, 2)?;
    if cfg.width == 0 || cfg.height == 0 {
        return Err(Error::InvalidArgument("image dimensions must be at least 1".into()));
    }
    if !(cfg.window.half_width > 0.0 && cfg.window.half_width.is_finite()) {
        return Err(Error::InvalidArgument("half_width must be positive".into()));
    }
    crate::poly::check_finite(cfg.window.center, "window center")?;
    let fixed_points: Vec<FixedPointRecord> =
        classify(p, &cfg.rootfind, DEFAULT_EPS_CLASS)?.into_iter().filter(|r| r.is_attractive()).collect();
    let escape = default_escape_radius(p);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let rows: Vec<Vec<(PixelLabel, usize)>> = pool.install(|| {
        (0..cfg.height)
            .into_par_iter()
            .map(|row| {
                (0..cfg.width)
                    .map(|col| {
                        let z = cfg.window.pixel_center(col, row, cfg.width, cfg.height);
                        let orbit =
                            iterate(p, z, cfg.max_steps, cfg.conv_tol, escape).expect("validated iteration parameters");
                        let label = match orbit.status {
                            OrbitStatus::Converged { to } => match_fixed_point(&fixed_points, to, cfg.conv_tol)
                                .map_or(PixelLabel::Other, PixelLabel::Fixed),
                            OrbitStatus::Escaped => PixelLabel::Escape,
                            OrbitStatus::Exhausted => PixelLabel::Other,
                        };
                        (label, orbit.steps)
                    })
                    .collect()
            })
            .collect()
    });
    let (labels, iterations) = rows.into_iter().flatten().unzip();
    Ok(BasinImage { width: cfg.width, height: cfg.height, window: cfg.window, fixed_points, labels, iterations })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelEntry {
    pub index: usize,
    #[serde(with = "complex")]
    pub theta: Complex64,
    #[serde(with = "complex")]
    pub multiplier: Complex64,
    pub color: [u8; 3],
}

/// JSON companion of the PPM raster.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasinSidecar {
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub labels: Vec<LabelEntry>,
    pub palette: Vec<[u8; 3]>,
    pub escape_color: [u8; 3],
    pub other_color: [u8; 3],
}

impl BasinImage {
    pub fn label(&self, col: usize, row: usize) -> PixelLabel {
        self.labels[row * self.width + col]
    }

    /// Binary PPM (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(3 * self.labels.len());
        for &l in &self.labels {
            out.extend_from_slice(&label_color(l));
        }
        out
    }

    pub fn sidecar(&self) -> BasinSidecar {
        BasinSidecar {
            window: self.window,
            width: self.width,
            height: self.height,
            labels: self
                .fixed_points
                .iter()
                .enumerate()
                .map(|(index, r)| LabelEntry {
                    index,
                    theta: r.theta,
                    multiplier: r.multiplier,
                    color: label_color(PixelLabel::Fixed(index)),
                })
                .collect(),
            palette: PALETTE.to_vec(),
            escape_color: ESCAPE_COLOR,
            other_color: OTHER_COLOR,
        }
    }
}
