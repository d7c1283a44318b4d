//! C interface to `polyfix`.
//!
//! Polynomials live behind the opaque [`PfPolynomial`] handle. Every fallible
//! function returns a [`PfStatus`]; on failure a description is available from
//! [`pf_last_error`] on the same thread until the next failing call.
//!
//! Complex numbers cross the boundary as interleaved `(re, im)` doubles.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polyfix::analysis::{check_half_bound, classify, conjecture_margin, FixedPointClass, Tolerances};
use polyfix::hermite::{synthesize, Node, NodeSystem};
use polyfix::{Complex64, Error, Polynomial, RootFindConfig};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonFinite = 3,
    DegreeTooSmall = 4,
    NoConvergence = 5,
    NodesTooClose = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Classification of a fixed point by the modulus of its multiplier.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfClass {
    Attractive = 0,
    Neutral = 1,
    Repelling = 2,
}

/// One fixed point `theta` with multiplier `p'(theta)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfFixedPoint {
    pub theta_re: f64,
    pub theta_im: f64,
    pub multiplier_re: f64,
    pub multiplier_im: f64,
    pub classification: PfClass,
}

/// Collinear attractive count against `ceil(degree / 2)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PfBoundReport {
    pub degree: usize,
    pub attractive_count: usize,
    pub max_collinear_attractive: usize,
    pub bound: usize,
    pub satisfied: bool,
}

/// Root-finding and classification settings. Obtain defaults from
/// [`pf_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub eps_class: f64,
    pub eps_line: f64,
}

/// Opaque polynomial handle.
pub struct PfPolynomial(Polynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(PfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NonFinite(_) => PfStatus::NonFinite,
            Error::DegreeTooSmall { .. } | Error::DegreeZero => PfStatus::DegreeTooSmall,
            Error::NoConvergence { .. } | Error::DidNotConverge => PfStatus::NoConvergence,
            Error::NodesTooClose { .. } => PfStatus::NodesTooClose,
            _ => PfStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PfStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PfStatus::Panic
        }
    }
}

unsafe fn complexes(data: *const f64, count: usize, what: &str) -> Result<Vec<Complex64>, Failure> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if data.is_null() {
        return Err(null(what));
    }
    let raw = std::slice::from_raw_parts(data, 2 * count);
    Ok(raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

unsafe fn handle<'a>(p: *const PfPolynomial) -> Result<&'a Polynomial, Failure> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("polynomial"))
}

unsafe fn store(out: *mut *mut PfPolynomial, p: Polynomial) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(PfPolynomial(p)));
    Ok(())
}

fn options(opts: *const PfOptions) -> Result<(RootFindConfig, Tolerances), Failure> {
    let o = unsafe { opts.as_ref() }.copied().unwrap_or(pf_options_default());
    let cfg = RootFindConfig { tol: o.tol, max_iter: o.max_iter, seed: o.seed };
    cfg.validate()?;
    if !(o.eps_class > 0.0 && o.eps_line > 0.0) {
        return Err(Failure(PfStatus::InvalidArgument, "eps_class and eps_line must be positive".into()));
    }
    Ok((cfg, Tolerances { eps_class: o.eps_class, eps_line: o.eps_line }))
}

/// Default options.
#[no_mangle]
pub extern "C" fn pf_options_default() -> PfOptions {
    let cfg = RootFindConfig::default();
    let tol = Tolerances::default();
    PfOptions { tol: cfg.tol, max_iter: cfg.max_iter, seed: cfg.seed, eps_class: tol.eps_class, eps_line: tol.eps_line }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn pf_status_string(status: PfStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        PfStatus::Ok => b"ok\0",
        PfStatus::NullPointer => b"null pointer\0",
        PfStatus::InvalidArgument => b"invalid argument\0",
        PfStatus::NonFinite => b"non-finite value\0",
        PfStatus::DegreeTooSmall => b"degree too small\0",
        PfStatus::NoConvergence => b"no convergence\0",
        PfStatus::NodesTooClose => b"nodes too close\0",
        PfStatus::BufferTooSmall => b"buffer too small\0",
        PfStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Builds a polynomial from `count` coefficients in ascending degree, given
/// as `2 * count` interleaved doubles.
#[no_mangle]
pub unsafe extern "C" fn pf_polynomial_new(coeffs: *const f64, count: usize, out: *mut *mut PfPolynomial) -> PfStatus {
    guard(|| {
        let c = complexes(coeffs, count, "coefficients")?;
        store(out, Polynomial::new(c)?)
    })
}

/// The member of the extremal family with `n` superattracting roots of unity.
#[no_mangle]
pub unsafe extern "C" fn pf_polynomial_exemplar(n: usize, out: *mut *mut PfPolynomial) -> PfStatus {
    guard(|| store(out, Polynomial::exemplar_family(n)?))
}

/// Hermite interpolant through `count` nodes, each four doubles
/// `(z_re, z_im, alpha_re, alpha_im)`: `h(z_i) = z_i`, `h'(z_i) = alpha_i`.
#[no_mangle]
pub unsafe extern "C" fn pf_synthesize(nodes: *const f64, count: usize, out: *mut *mut PfPolynomial) -> PfStatus {
    guard(|| {
        let flat = complexes(nodes, 2 * count, "nodes")?;
        let nodes = flat.chunks_exact(2).map(|w| Node::new(w[0], w[1])).collect();
        store(out, synthesize(&NodeSystem::new(nodes)?).h)
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pf_polynomial_free(p: *mut PfPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Degree of the polynomial; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pf_polynomial_degree(p: *const PfPolynomial) -> usize {
    p.as_ref().map_or(0, |h| h.0.degree())
}

/// Writes the coefficients into `out` (room for `capacity` complex values)
/// and their number into `count`. With a short buffer nothing is written
/// except `count`, and the call fails with `BufferTooSmall`.
#[no_mangle]
pub unsafe extern "C" fn pf_polynomial_coeffs(
    p: *const PfPolynomial,
    out: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> PfStatus {
    guard(|| {
        let c = handle(p)?.coeffs();
        write_complexes(c, out, capacity, count)
    })
}

unsafe fn write_complexes(v: &[Complex64], out: *mut f64, capacity: usize, count: *mut usize) -> Result<(), Failure> {
    if count.is_null() {
        return Err(null("count"));
    }
    *count = v.len();
    if capacity < v.len() {
        return Err(Failure(PfStatus::BufferTooSmall, format!("need room for {} values", v.len())));
    }
    if v.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(null("output buffer"));
    }
    let dst = std::slice::from_raw_parts_mut(out, 2 * v.len());
    for (d, z) in dst.chunks_exact_mut(2).zip(v) {
        d[0] = z.re;
        d[1] = z.im;
    }
    Ok(())
}

/// Evaluates `p(re + i im)` into `out[0..2]`.
#[no_mangle]
pub unsafe extern "C" fn pf_polynomial_eval(p: *const PfPolynomial, re: f64, im: f64, out: *mut f64) -> PfStatus {
    guard(|| {
        let p = handle(p)?;
        if out.is_null() {
            return Err(null("output"));
        }
        let v = p.eval(Complex64::new(re, im));
        *out = v.re;
        *out.add(1) = v.im;
        Ok(())
    })
}

/// Fixed points with multipliers and classes, in lexicographic order. `count`
/// receives the number of fixed points (the degree); `out` must have room
/// for that many records. `opts` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn pf_fixed_points(
    p: *const PfPolynomial,
    opts: *const PfOptions,
    out: *mut PfFixedPoint,
    capacity: usize,
    count: *mut usize,
) -> PfStatus {
    guard(|| {
        let p = handle(p)?;
        if count.is_null() {
            return Err(null("count"));
        }
        let (cfg, tol) = options(opts)?;
        let recs = classify(p, &cfg, tol.eps_class)?;
        *count = recs.len();
        if capacity < recs.len() {
            return Err(Failure(PfStatus::BufferTooSmall, format!("need room for {} records", recs.len())));
        }
        if out.is_null() {
            return Err(null("output buffer"));
        }
        for (i, r) in recs.iter().enumerate() {
            *out.add(i) = PfFixedPoint {
                theta_re: r.theta.re,
                theta_im: r.theta.im,
                multiplier_re: r.multiplier.re,
                multiplier_im: r.multiplier.im,
                classification: match r.class {
                    FixedPointClass::Attractive => PfClass::Attractive,
                    FixedPointClass::Neutral => PfClass::Neutral,
                    FixedPointClass::Repelling => PfClass::Repelling,
                },
            };
        }
        Ok(())
    })
}

/// Largest set of collinear attractive fixed points against `ceil(degree/2)`.
#[no_mangle]
pub unsafe extern "C" fn pf_check_half_bound(
    p: *const PfPolynomial,
    opts: *const PfOptions,
    out: *mut PfBoundReport,
) -> PfStatus {
    guard(|| {
        let p = handle(p)?;
        if out.is_null() {
            return Err(null("output"));
        }
        let (cfg, tol) = options(opts)?;
        let rep = check_half_bound(p, &cfg, &tol)?;
        *out = PfBoundReport {
            degree: rep.degree,
            attractive_count: rep.attractive_count,
            max_collinear_attractive: rep.max_collinear_attractive,
            bound: rep.bound,
            satisfied: rep.satisfied,
        };
        Ok(())
    })
}

/// `max Re p'(theta)` over the fixed points.
#[no_mangle]
pub unsafe extern "C" fn pf_conjecture_margin(
    p: *const PfPolynomial,
    opts: *const PfOptions,
    out: *mut f64,
) -> PfStatus {
    guard(|| {
        let p = handle(p)?;
        if out.is_null() {
            return Err(null("output"));
        }
        let (cfg, _) = options(opts)?;
        *out = conjecture_margin(p, &cfg)?;
        Ok(())
    })
}
