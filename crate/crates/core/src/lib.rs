//! Fixed points and multipliers of complex polynomials.
//!
//! * [`poly`]: dense complex polynomial arithmetic.
//! * [`rootfind`]: simultaneous root finding, hence all fixed points at once.
//! * [`hermite`]: polynomials with prescribed fixed points and multipliers.
//! * [`analysis`]: classification, the collinear attractive bound and the
//!   multiplier margin search.
//! * [`dynamics`]: orbits, convergence rates, critical orbits, basin rasters.
//! * [`cli`]: the `polyfix` command line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod hermite;
pub mod json;
pub mod poly;
pub mod rootfind;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::Polynomial;
pub use rootfind::RootFindConfig;
