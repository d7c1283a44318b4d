//! The `polyfix` command line.
//!
//! Exit codes: 0 success, 2 invalid input or usage, 3 root finder failure,
//! 4 a bound or margin violation (the report is still written).

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    bound_from_records, check_half_bound, classify, conjecture_margin, conjecture_search, cubic_decomposition,
    quadratic_identity_check, random_polynomial, sample_seed, BoundReport, SearchConfig, Strategy, Tolerances,
    DEFAULT_EPS_CLASS, DEFAULT_EPS_LINE, VIOLATION_SLACK,
};
use crate::dynamics::{
    critical_orbit_coverage, default_escape_radius, iterate, render_basins, BasinConfig, Window, DEFAULT_CONV_TOL,
    DEFAULT_MAX_STEPS,
};
use crate::error::Error;
use crate::hermite::synthesize;
use crate::json::{self, complex, complex_vec, PolynomialJson};
use crate::poly::Polynomial;
use crate::rootfind::{fixed_points, RootFindConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "polyfix", version, about = "Fixed points, multipliers and Hermite synthesis for complex polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify fixed points, check the collinear bound and report the margin.
    Analyze {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        roots: RootArgs,
        #[command(flatten)]
        eps: EpsArgs,
    },
    /// Build the Hermite interpolant for prescribed fixed points and multipliers.
    Synthesize {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Check the collinear bound over a corpus file or a random stream.
    VerifyBound {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        stream: StreamArgs,
        #[command(flatten)]
        roots: RootArgs,
        #[command(flatten)]
        eps: EpsArgs,
    },
    /// Randomized search for a fixed-point margin below 1.
    Conjecture {
        #[command(flatten)]
        stream: StreamArgs,
        #[command(flatten)]
        roots: RootArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact quadratic and cubic multiplier identities.
    Identity {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        stream: StreamArgs,
    },
    /// Dump the orbit of a seed under the polynomial.
    Iterate {
        #[command(flatten)]
        io: InputArgs,
        /// Seed point as `re,im`.
        #[arg(long, value_parser = parse_complex)]
        x0: Complex64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long, default_value_t = DEFAULT_CONV_TOL)]
        conv_tol: f64,
        #[arg(long)]
        escape_radius: Option<f64>,
    },
    /// Check that every attractive fixed point attracts a critical orbit.
    Coverage {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        roots: RootArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Render basins of attraction to a PPM image plus a JSON sidecar.
    Basins {
        #[command(flatten)]
        io: InputArgs,
        #[command(flatten)]
        roots: RootArgs,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        /// Window center as `re,im`.
        #[arg(long, value_parser = parse_complex, default_value = "0,0")]
        center: Complex64,
        #[arg(long, default_value_t = 2.0)]
        half_width: f64,
        #[arg(long, default_value_t = 500)]
        max_steps: usize,
        #[arg(long, default_value_t = DEFAULT_CONV_TOL)]
        conv_tol: f64,
        #[arg(long)]
        workers: Option<usize>,
        /// Sidecar path; defaults to the image path with a `.json` extension.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Emit `(-z^{n+1} + (n+1) z) / n`.
    Exemplar {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input JSON file (`-` for stdin).
    #[arg(long, conflicts_with = "json")]
    input: Option<PathBuf>,
    /// Inline input JSON.
    #[arg(long)]
    json: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StreamArgs {
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_strategy)]
    strategy: Option<Strategy>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct RootArgs {
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Seed for the root finder's initial rotation.
    #[arg(long = "root-seed", default_value_t = 0)]
    root_seed: u64,
}

#[derive(Debug, Args)]
struct EpsArgs {
    #[arg(long, default_value_t = DEFAULT_EPS_CLASS)]
    eps_class: f64,
    #[arg(long, default_value_t = DEFAULT_EPS_LINE)]
    eps_line: f64,
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected `re,im`, got {s:?}")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err("non-finite value".into())
    }
}

fn parse_strategy(s: &str) -> std::result::Result<Strategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure that maps to an exit code.
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Self::Lib(Error::NoConvergence { .. }) => EXIT_NO_CONVERGENCE,
            _ => EXIT_INVALID,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Lib(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Ctx<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&mut self, output: Option<&Path>, value: &T) -> CliResult<()> {
        let mut text = json::to_json_string(value);
        text.push('\n');
        match output {
            Some(path) => std::fs::write(path, text)?,
            None => self.stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.stderr, "{msg}");
    }

    fn alarm(&mut self, headline: &str, instance: &impl Serialize) {
        let _ = writeln!(self.stderr, "!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!");
        let _ = writeln!(self.stderr, "!!! {headline}");
        let _ = writeln!(self.stderr, "{}", json::to_json_string(instance));
        let _ = writeln!(self.stderr, "!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!!");
    }
}

fn read_input(io: &InputArgs) -> CliResult<String> {
    match (&io.input, &io.json) {
        (_, Some(text)) => Ok(text.clone()),
        (Some(p), None) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
        (Some(p), None) => Ok(std::fs::read_to_string(p)?),
        (None, None) => Err(Error::InvalidArgument("provide --input or --json".into()).into()),
    }
}

fn read_polynomial(io: &InputArgs) -> CliResult<Polynomial> {
    Ok(json::parse_polynomial(&read_input(io)?)?)
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Lib(Error::InvalidArgument(msg.into()))
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be positive, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> CliResult<()> {
    if v >= min {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be at least {min}, got {v}")))
    }
}

impl RootArgs {
    fn config(&self) -> CliResult<RootFindConfig> {
        let cfg = RootFindConfig { tol: self.tol, max_iter: self.max_iter, seed: self.root_seed };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl EpsArgs {
    fn tolerances(&self) -> CliResult<Tolerances> {
        positive("eps-class", self.eps_class)?;
        positive("eps-line", self.eps_line)?;
        if self.eps_class >= 1.0 {
            return Err(invalid("--eps-class must be below 1"));
        }
        Ok(Tolerances { eps_class: self.eps_class, eps_line: self.eps_line })
    }
}

fn workers(w: Option<usize>) -> CliResult<usize> {
    match w {
        Some(0) => Err(invalid("--workers must be at least 1")),
        Some(n) => Ok(n),
        None => Ok(0),
    }
}

/// Explicit seed, or a fresh one that is announced so the run can be replayed.
fn resolve_seed(ctx: &mut Ctx, seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s: u64 = rand::thread_rng().gen();
        ctx.note(&format!("seed: {s}"));
        s
    })
}

#[derive(Serialize)]
struct AnalyzeReport {
    #[serde(with = "complex_vec")]
    coeffs: Vec<Complex64>,
    degree: usize,
    bound: BoundReport,
    conjecture_margin: f64,
    margin_ok: bool,
}

fn cmd_analyze(ctx: &mut Ctx, io: &InputArgs, roots: &RootArgs, eps: &EpsArgs) -> CliResult<i32> {
    let p = read_polynomial(io)?;
    let cfg = roots.config()?;
    let tol = eps.tolerances()?;
    if p.degree() < 2 {
        return Err(Error::DegreeTooSmall { found: p.degree(), required: 2 }.into());
    }
    let bound = check_half_bound(&p, &cfg, &tol)?;
    let margin = conjecture_margin(&p, &cfg)?;
    let report = AnalyzeReport {
        coeffs: p.coeffs().to_vec(),
        degree: p.degree(),
        margin_ok: margin >= 1.0 - VIOLATION_SLACK,
        conjecture_margin: margin,
        bound,
    };
    ctx.emit(io.output.as_deref(), &report)?;
    let mut code = EXIT_OK;
    if !report.bound.satisfied {
        ctx.alarm("collinear attractive bound exceeded", &PolynomialJson::from(&p));
        code = EXIT_VIOLATION;
    }
    if !report.margin_ok {
        ctx.alarm("multiplier margin below 1", &PolynomialJson::from(&p));
        code = EXIT_VIOLATION;
    }
    Ok(code)
}

#[derive(Serialize)]
struct SynthesizeReport {
    /// The interpolant, so the report can be fed straight to `analyze`.
    #[serde(with = "complex_vec")]
    coeffs: Vec<Complex64>,
    #[serde(with = "complex_vec")]
    newton_coeffs: Vec<Complex64>,
    #[serde(with = "complex_vec")]
    doubled_nodes: Vec<Complex64>,
    #[serde(with = "complex")]
    leading_coefficient: Complex64,
    achieved_degree: usize,
    max_degree: usize,
    value_residual: f64,
    derivative_residual: f64,
}

fn cmd_synthesize(ctx: &mut Ctx, io: &InputArgs) -> CliResult<i32> {
    let sys = json::parse_node_system(&read_input(io)?)?;
    let out = synthesize(&sys);
    let res = out.residuals(&sys);
    let report = SynthesizeReport {
        coeffs: out.h.coeffs().to_vec(),
        newton_coeffs: out.newton_coeffs,
        doubled_nodes: out.doubled_nodes,
        leading_coefficient: out.leading_coefficient,
        achieved_degree: out.achieved_degree,
        max_degree: 2 * sys.len() - 1,
        value_residual: res.value,
        derivative_residual: res.derivative,
    };
    ctx.emit(io.output.as_deref(), &report)?;
    Ok(EXIT_OK)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Corpus {
    List(Vec<PolynomialJson>),
    Wrapped { polynomials: Vec<PolynomialJson> },
    Single(PolynomialJson),
}

#[derive(Serialize)]
struct BoundFailure {
    index: usize,
    #[serde(with = "complex_vec")]
    coeffs: Vec<Complex64>,
    max_collinear_attractive: usize,
    bound: usize,
}

#[derive(Serialize)]
struct VerifyBoundReport {
    checked: usize,
    skipped: usize,
    satisfied: bool,
    max_tightness: Option<f64>,
    seed: Option<u64>,
    strategy: Option<Strategy>,
    degree: Option<usize>,
    failures: Vec<BoundFailure>,
}

fn cmd_verify_bound(
    ctx: &mut Ctx,
    io: &InputArgs,
    stream: &StreamArgs,
    roots: &RootArgs,
    eps: &EpsArgs,
) -> CliResult<i32> {
    let cfg = roots.config()?;
    let tol = eps.tolerances()?;
    let from_file = io.input.is_some() || io.json.is_some();
    let (polys, seed, strategy, degree): (Vec<Polynomial>, _, _, _) = if from_file {
        let corpus: Corpus =
            serde_json::from_str(&read_input(io)?).map_err(|e| invalid(format!("corpus JSON: {e}")))?;
        let list = match corpus {
            Corpus::List(v) | Corpus::Wrapped { polynomials: v } => v,
            Corpus::Single(p) => vec![p],
        };
        let polys = list.into_iter().map(|p| p.into_polynomial()).collect::<Result<Vec<_>, _>>()?;
        (polys, None, None, None)
    } else {
        let degree = stream.degree.ok_or_else(|| invalid("--degree is required without --input"))?;
        at_least("degree", degree, 2)?;
        let samples = stream.samples.unwrap_or(1000);
        at_least("samples", samples, 1)?;
        let strategy = stream.strategy.unwrap_or(Strategy::Coefficient);
        let seed = resolve_seed(ctx, stream.seed);
        let polys = (0..samples)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, i as u64));
                random_polynomial(&mut rng, degree, strategy)
            })
            .collect();
        (polys, Some(seed), Some(strategy), Some(degree))
    };
    for p in &polys {
        if p.degree() < 2 {
            return Err(Error::DegreeTooSmall { found: p.degree(), required: 2 }.into());
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers(stream.workers)?)
        .build()
        .map_err(|e| invalid(e.to_string()))?;
    let outcomes: Vec<Option<BoundReport>> = pool.install(|| {
        polys
            .par_iter()
            .map(|p| classify(p, &cfg, tol.eps_class).ok().map(|r| bound_from_records(p.degree(), r, tol.eps_line)))
            .collect()
    });
    let mut failures = Vec::new();
    let mut skipped = 0;
    let mut max_tightness: Option<f64> = None;
    for (index, (p, outcome)) in polys.iter().zip(&outcomes).enumerate() {
        match outcome {
            None => skipped += 1,
            Some(rep) => {
                let t = rep.max_collinear_attractive as f64 / rep.bound as f64;
                max_tightness = Some(max_tightness.map_or(t, |m| m.max(t)));
                if !rep.satisfied {
                    failures.push(BoundFailure {
                        index,
                        coeffs: p.coeffs().to_vec(),
                        max_collinear_attractive: rep.max_collinear_attractive,
                        bound: rep.bound,
                    });
                }
            }
        }
    }
    let report = VerifyBoundReport {
        checked: polys.len() - skipped,
        skipped,
        satisfied: failures.is_empty(),
        max_tightness,
        seed,
        strategy,
        degree,
        failures,
    };
    ctx.emit(io.output.as_deref(), &report)?;
    if !report.satisfied {
        ctx.alarm("collinear attractive bound exceeded", &report.failures);
        return Ok(EXIT_VIOLATION);
    }
    if from_file && skipped > 0 {
        return Err(Error::NoConvergence { iterations: cfg.max_iter, residual: f64::NAN }.into());
    }
    Ok(EXIT_OK)
}

fn cmd_conjecture(ctx: &mut Ctx, stream: &StreamArgs, roots: &RootArgs, out: &OutputArgs) -> CliResult<i32> {
    let degree = stream.degree.ok_or_else(|| invalid("--degree is required"))?;
    at_least("degree", degree, 2)?;
    let samples = stream.samples.unwrap_or(10_000);
    at_least("samples", samples, 1)?;
    let seed = resolve_seed(ctx, stream.seed);
    let cfg = SearchConfig {
        degree,
        samples,
        seed,
        strategy: stream.strategy.unwrap_or(Strategy::Coefficient),
        workers: workers(stream.workers)?,
        rootfind: roots.config()?,
    };
    let report = conjecture_search(&cfg)?;
    ctx.emit(out.output.as_deref(), &report)?;
    if report.violations > 0 {
        ctx.alarm(
            &format!("{} sample(s) with multiplier margin below 1", report.violations),
            &report.violation_instances,
        );
        return Ok(EXIT_VIOLATION);
    }
    if !report.passed() {
        ctx.note(&format!("skip rate {:.4} exceeds 1%", report.skip_rate()));
        return Ok(EXIT_NO_CONVERGENCE);
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum IdentityReport {
    Quadratic(crate::analysis::QuadraticIdentity),
    Cubic {
        #[serde(with = "complex")]
        c: Complex64,
        #[serde(with = "complex_vec")]
        fixed_points: Vec<Complex64>,
        decomposition: crate::analysis::CubicDecomposition,
    },
    Batch {
        degree: usize,
        samples: usize,
        seed: u64,
        failures: usize,
        skipped: usize,
        min_margin: f64,
    },
}

/// `Ok(None)` when the instance is degenerate (coincident fixed points).
fn identity_single(p: &Polynomial, cfg: &RootFindConfig) -> CliResult<Option<(IdentityReport, bool)>> {
    match p.degree() {
        2 => match quadratic_identity_check(p) {
            Ok(q) => {
                let ok = q.ok && q.margin >= 1.0 - 1e-9;
                Ok(Some((IdentityReport::Quadratic(q), ok)))
            }
            Err(Error::MultipleFixedPoint(_)) => Ok(None),
            Err(e) => Err(e.into()),
        },
        3 => {
            let fps = fixed_points(p, cfg)?;
            let c = p.leading();
            match cubic_decomposition(c, fps[0], fps[1], fps[2]) {
                Ok(d) => {
                    let ok = d.alpha_sum_ok && d.lambdas_ok && d.margin >= 1.0 - 1e-9;
                    Ok(Some((IdentityReport::Cubic { c, fixed_points: fps, decomposition: d }, ok)))
                }
                Err(Error::NodesTooClose { .. }) => Ok(None),
                Err(e) => Err(e.into()),
            }
        }
        d => Err(Error::WrongDegree { expected: 2, found: d }.into()),
    }
}

fn cmd_identity(ctx: &mut Ctx, io: &InputArgs, stream: &StreamArgs) -> CliResult<i32> {
    let cfg = RootFindConfig::default();
    if io.input.is_some() || io.json.is_some() {
        let p = read_polynomial(io)?;
        return match identity_single(&p, &cfg)? {
            Some((report, ok)) => {
                ctx.emit(io.output.as_deref(), &report)?;
                if ok {
                    Ok(EXIT_OK)
                } else {
                    ctx.alarm("multiplier identity failed", &PolynomialJson::from(&p));
                    Ok(EXIT_VIOLATION)
                }
            }
            None => Err(Error::MultipleFixedPoint(crate::analysis::FIXED_POINT_SEPARATION).into()),
        };
    }
    let degree = stream.degree.unwrap_or(2);
    if degree != 2 && degree != 3 {
        return Err(invalid("--degree must be 2 or 3"));
    }
    let samples = stream.samples.unwrap_or(10_000);
    at_least("samples", samples, 1)?;
    let seed = resolve_seed(ctx, stream.seed);
    let strategy = stream.strategy.unwrap_or(Strategy::Coefficient);
    let mut failures = 0;
    let mut skipped = 0;
    let mut min_margin = f64::INFINITY;
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, i as u64));
        let p = random_polynomial(&mut rng, degree, strategy);
        match identity_single(&p, &cfg) {
            Ok(Some((rep, ok))) => {
                if !ok {
                    failures += 1;
                }
                let m = match rep {
                    IdentityReport::Quadratic(q) => q.margin,
                    IdentityReport::Cubic { decomposition, .. } => decomposition.margin,
                    IdentityReport::Batch { .. } => unreachable!(),
                };
                min_margin = min_margin.min(m);
            }
            Ok(None) | Err(_) => skipped += 1,
        }
    }
    let report = IdentityReport::Batch { degree, samples, seed, failures, skipped, min_margin };
    ctx.emit(io.output.as_deref(), &report)?;
    Ok(if failures > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_iterate(
    ctx: &mut Ctx,
    io: &InputArgs,
    x0: Complex64,
    max_steps: usize,
    conv_tol: f64,
    escape_radius: Option<f64>,
) -> CliResult<i32> {
    let p = read_polynomial(io)?;
    at_least("max-steps", max_steps, 1)?;
    positive("conv-tol", conv_tol)?;
    let radius = match escape_radius {
        Some(r) => {
            positive("escape-radius", r)?;
            r
        }
        None => default_escape_radius(&p),
    };
    let orbit = iterate(&p, x0, max_steps, conv_tol, radius)?;
    ctx.emit(io.output.as_deref(), &orbit)?;
    Ok(EXIT_OK)
}

fn cmd_coverage(ctx: &mut Ctx, io: &InputArgs, roots: &RootArgs, max_steps: usize) -> CliResult<i32> {
    let p = read_polynomial(io)?;
    at_least("max-steps", max_steps, 1)?;
    let rep = critical_orbit_coverage(&p, &roots.config()?, max_steps)?;
    ctx.emit(io.output.as_deref(), &rep)?;
    if !rep.all_covered {
        ctx.note(&format!(
            "attractive fixed point(s) {:?} not reached by any critical orbit (possible attracting cycle)",
            rep.uncovered
        ));
    }
    if !rep.within_critical_bound {
        ctx.alarm("more attractive fixed points than critical points", &PolynomialJson::from(&p));
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_basins(
    ctx: &mut Ctx,
    io: &InputArgs,
    roots: &RootArgs,
    width: usize,
    height: usize,
    center: Complex64,
    half_width: f64,
    max_steps: usize,
    conv_tol: f64,
    worker_count: Option<usize>,
    sidecar: Option<&Path>,
) -> CliResult<i32> {
    let p = read_polynomial(io)?;
    at_least("width", width, 1)?;
    at_least("height", height, 1)?;
    at_least("max-steps", max_steps, 1)?;
    positive("half-width", half_width)?;
    positive("conv-tol", conv_tol)?;
    let image_path = io.output.as_deref().ok_or_else(|| invalid("basins needs --output for the PPM image"))?;
    let cfg = BasinConfig {
        window: Window { center, half_width },
        width,
        height,
        max_steps,
        conv_tol,
        workers: workers(worker_count)?,
        rootfind: roots.config()?,
    };
    let img = render_basins(&p, &cfg)?;
    std::fs::write(image_path, img.to_ppm())?;
    let sidecar_path = sidecar.map(Path::to_path_buf).unwrap_or_else(|| image_path.with_extension("json"));
    ctx.emit(Some(&sidecar_path), &img.sidecar())?;
    ctx.emit(None, &img.sidecar())?;
    Ok(EXIT_OK)
}

fn cmd_exemplar(ctx: &mut Ctx, n: usize, out: &OutputArgs) -> CliResult<i32> {
    let p = Polynomial::exemplar_family(n)?;
    ctx.emit(out.output.as_deref(), &PolynomialJson::from(&p))?;
    Ok(EXIT_OK)
}

fn dispatch(ctx: &mut Ctx, cmd: Command) -> CliResult<i32> {
    match cmd {
        Command::Analyze { io, roots, eps } => cmd_analyze(ctx, &io, &roots, &eps),
        Command::Synthesize { io } => cmd_synthesize(ctx, &io),
        Command::VerifyBound { io, stream, roots, eps } => cmd_verify_bound(ctx, &io, &stream, &roots, &eps),
        Command::Conjecture { stream, roots, out } => cmd_conjecture(ctx, &stream, &roots, &out),
        Command::Identity { io, stream } => cmd_identity(ctx, &io, &stream),
        Command::Iterate { io, x0, max_steps, conv_tol, escape_radius } => {
            cmd_iterate(ctx, &io, x0, max_steps, conv_tol, escape_radius)
        }
        Command::Coverage { io, roots, max_steps } => cmd_coverage(ctx, &io, &roots, max_steps),
        Command::Basins { io, roots, width, height, center, half_width, max_steps, conv_tol, workers, sidecar } => {
            cmd_basins(
                ctx,
                &io,
                &roots,
                width,
                height,
                center,
                half_width,
                max_steps,
                conv_tol,
                workers,
                sidecar.as_deref(),
            )
        }
        Command::Exemplar { n, out } => cmd_exemplar(ctx, n, &out),
    }
}

/// Runs the CLI against explicit output streams and returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    let mut ctx = Ctx { stdout, stderr };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(f) => {
            ctx.note(&format!("error: {f}"));
            f.exit_code()
        }
    }
}

/// Runs the CLI on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run_with(argv, &mut out, &mut err);
    let _ = out.flush();
    code
}
