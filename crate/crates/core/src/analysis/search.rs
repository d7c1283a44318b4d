//! Seeded random search for polynomials whose multiplier margin drops below 1.
//!
//! Every sample draws from its own generator, seeded by mixing the run seed
//! with the sample index, and partial reports merge associatively. The report
//! is therefore identical for any number of workers.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::margin_at;
use crate::error::{Error, Result};
use crate::json::complex_vec;
use crate::poly::Polynomial;
use crate::rootfind::{fixed_points, RootFindConfig};

pub const HISTOGRAM_BINS: usize = 64;
pub const HISTOGRAM_MAX: f64 = 4.0;
/// Margins below `1 - VIOLATION_SLACK` count as violations.
pub const VIOLATION_SLACK: f64 = 1e-6;
/// Fixed points closer than this fraction of their spread trigger a resample.
pub const CLUSTER_RELATIVE: f64 = 1e-8;
/// Draws per sample before it is counted as skipped.
const MAX_ATTEMPTS: usize = 32;
/// Violating instances kept in the report, lowest sample indices first.
const MAX_VIOLATION_INSTANCES: usize = 16;
/// Largest tolerated fraction of skipped samples.
pub const MAX_SKIP_RATE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Real and imaginary parts of every coefficient uniform in `[-1, 1]`,
    /// leading coefficient redrawn until `|a_n| >= 0.1`.
    Coefficient,
    /// `c (z - z_1)...(z - z_n) + z` with `0.1 <= |c| <= 2` and the `z_i`
    /// uniform in the unit disk.
    FixedPoint,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::Coefficient => "coefficient",
            Self::FixedPoint => "fixed-point",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coefficient" => Ok(Self::Coefficient),
            "fixed-point" => Ok(Self::FixedPoint),
            other => Err(Error::InvalidArgument(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub degree: usize,
    pub samples: usize,
    pub seed: u64,
    pub strategy: Strategy,
    /// Worker threads; 0 means available parallelism.
    pub workers: usize,
    pub rootfind: RootFindConfig,
}

impl SearchConfig {
    pub fn new(degree: usize, samples: usize, seed: u64, strategy: Strategy) -> Self {
        Self { degree, samples, seed, strategy, workers: 0, rootfind: RootFindConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationInstance {
    pub sample: usize,
    pub margin: f64,
    #[serde(with = "complex_vec")]
    pub coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub min_margin: Option<f64>,
    #[serde(serialize_with = "serialize_opt_coeffs")]
    pub argmin_coeffs: Option<Vec<Complex64>>,
    /// 64 bins over `[0, 4]`, out-of-range margins clamped to the end bins.
    pub histogram: Vec<u64>,
    pub violations: u64,
    pub skipped: u64,
    pub samples: u64,
    pub seed: u64,
    pub strategy: Strategy,
    pub degree: usize,
    pub argmin_sample: Option<usize>,
    pub violation_instances: Vec<ViolationInstance>,
}

fn serialize_opt_coeffs<S: serde::Serializer>(
    v: &Option<Vec<Complex64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|c| c.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).serialize(s)
}

impl SearchReport {
    pub fn skip_rate(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.skipped as f64 / self.samples as f64
        }
    }

    /// No violations and an acceptable skip rate.
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.skip_rate() <= MAX_SKIP_RATE
    }
}

/// Counter-based split of the run seed (splitmix64 finalizer).
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_disk<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

/// One polynomial of exactly `degree` from the given strategy.
pub fn random_polynomial<R: Rng>(rng: &mut R, degree: usize, strategy: Strategy) -> Polynomial {
    match strategy {
        Strategy::Coefficient => {
            let mut coeffs: Vec<Complex64> =
                (0..=degree).map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
            while coeffs[degree].norm() < 0.1 {
                coeffs[degree] = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            }
            Polynomial::new(coeffs).expect("finite coefficients")
        }
        Strategy::FixedPoint => {
            // area-uniform in the annulus 0.1 <= |c| <= 2
            let r = rng.gen_range(0.01..=4.0f64).sqrt();
            let c = Complex64::from_polar(r, rng.gen_range(0.0..TAU));
            let zs: Vec<Complex64> = (0..degree).map(|_| unit_disk(rng)).collect();
            Polynomial::from_fixed_point_form(c, &zs).expect("nonzero c")
        }
    }
}

fn clustered(points: &[Complex64]) -> bool {
    let mut spread: f64 = 0.0;
    let mut closest = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = (points[i] - points[j]).norm();
            spread = spread.max(d);
            closest = closest.min(d);
        }
    }
    closest < CLUSTER_RELATIVE * spread || spread == 0.0
}

enum Outcome {
    Margin { margin: f64, coeffs: Vec<Complex64> },
    Skipped,
}

fn run_sample(cfg: &SearchConfig, index: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, index as u64));
    for _ in 0..MAX_ATTEMPTS {
        let p = random_polynomial(&mut rng, cfg.degree, cfg.strategy);
        let rf = cfg.rootfind.with_seed(rng.gen());
        let Ok(fps) = fixed_points(&p, &rf) else {
            return Outcome::Skipped;
        };
        if clustered(&fps) {
            continue;
        }
        let margin = margin_at(&p.derivative(), &fps);
        return Outcome::Margin { margin, coeffs: p.into_coeffs() };
    }
    Outcome::Skipped
}

#[derive(Debug, Clone)]
struct Partial {
    min: Option<(f64, usize, Vec<Complex64>)>,
    histogram: Vec<u64>,
    violations: u64,
    skipped: u64,
    samples: u64,
    instances: Vec<ViolationInstance>,
}

impl Partial {
    fn empty() -> Self {
        Self {
            min: None,
            histogram: vec![0; HISTOGRAM_BINS],
            violations: 0,
            skipped: 0,
            samples: 0,
            instances: Vec::new(),
        }
    }

    fn record(mut self, index: usize, outcome: Outcome) -> Self {
        self.samples += 1;
        match outcome {
            Outcome::Skipped => self.skipped += 1,
            Outcome::Margin { margin, coeffs } => {
                let bin = ((margin / HISTOGRAM_MAX) * HISTOGRAM_BINS as f64).floor();
                let bin = if bin.is_nan() { 0 } else { bin.clamp(0.0, (HISTOGRAM_BINS - 1) as f64) as usize };
                self.histogram[bin] += 1;
                if margin < 1.0 - VIOLATION_SLACK {
                    self.violations += 1;
                    self.instances.push(ViolationInstance { sample: index, margin, coeffs: coeffs.clone() });
                    self.instances.truncate(MAX_VIOLATION_INSTANCES);
                }
                let better = match &self.min {
                    None => true,
                    Some((m, i, _)) => margin.total_cmp(m).then(index.cmp(i)).is_lt(),
                };
                if better {
                    self.min = Some((margin, index, coeffs));
                }
            }
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.samples += other.samples;
        self.skipped += other.skipped;
        self.violations += other.violations;
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self.min = match (self.min, other.min) {
            (None, b) => b,
            (a, None) => a,
            (Some(a), Some(b)) => {
                if b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)).is_lt() {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        };
        self.instances.extend(other.instances);
        self.instances.sort_by_key(|v| v.sample);
        self.instances.truncate(MAX_VIOLATION_INSTANCES);
        self
    }
}

pub fn conjecture_search(cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.degree < 2 {
        return Err(Error::DegreeTooSmall { found: cfg.degree, required: 2 });
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    cfg.rootfind.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let total = pool.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .fold(Partial::empty, |acc, i| acc.record(i, run_sample(cfg, i)))
            .reduce(Partial::empty, Partial::merge)
    });
    let (min_margin, argmin_sample, argmin_coeffs) = match total.min {
        Some((m, i, c)) => (Some(m), Some(i), Some(c)),
        None => (None, None, None),
    };
    Ok(SearchReport {
        min_margin,
        argmin_coeffs,
        histogram: total.histogram,
        violations: total.violations,
        skipped: total.skipped,
        samples: total.samples,
        seed: cfg.seed,
        strategy: cfg.strategy,
        degree: cfg.degree,
        argmin_sample,
        violation_instances: total.instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratics_never_violate() {
        for strategy in [Strategy::Coefficient, Strategy::FixedPoint] {
            let rep = conjecture_search(&SearchConfig::new(2, 2000, 11, strategy)).unwrap();
            assert_eq!(rep.violations, 0);
            assert!(rep.min_margin.unwrap() >= 1.0 - 1e-9);
            assert_eq!(rep.histogram.iter().sum::<u64>() + rep.skipped, rep.samples);
        }
    }

    #[test]
    fn worker_count_does_not_change_report() {
        let mut cfg = SearchConfig::new(4, 500, 99, Strategy::FixedPoint);
        cfg.workers = 1;
        let one = conjecture_search(&cfg).unwrap();
        cfg.workers = 5;
        let five = conjecture_search(&cfg).unwrap();
        assert_eq!(one, five);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(matches!(
            conjecture_search(&SearchConfig::new(1, 10, 0, Strategy::Coefficient)),
            Err(Error::DegreeTooSmall { .. })
        ));
        assert!(matches!(
            conjecture_search(&SearchConfig::new(3, 0, 0, Strategy::Coefficient)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn sample_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| sample_seed(5, i)).collect();
        let mut b = a.clone();
        b.sort();
        b.dedup();
        assert_eq!(a.len(), b.len());
    }

    #[test]
    fn clustered_detection() {
        let pts = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-10, 0.0)];
        assert!(clustered(&pts));
        assert!(!clustered(&pts[..2]));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [Strategy::Coefficient, Strategy::FixedPoint] {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
    }
}
