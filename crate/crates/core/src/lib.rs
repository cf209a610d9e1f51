//! Ground states of a two-dimensional Bose condensate trapped in a disordered
//! landscape of cylindrical wells, and the observables derived from them.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: radial grids, quadrature, Bessel functions, root finding
//! - [`gp`]: the constrained Gross-Pitaevskii ground state in one well
//! - [`localization`]: minimisation over the well radius, the
//!   localization-length curve and its critical power-law fit
//! - [`thermo`]: condensate fraction and condensation temperature at finite T
//! - [`superradiance`]: collective emission pattern, cooperativity and rate
//!   enhancement for a condensate of a given size
//! - [`materials`]: physical constants, exciton parameters, unit conversions
//! - [`run`]: configuration, sweeps and CSV output behind the `boseglass` binary
//!
//! Lengths are dimensionless in units of the disorder length `L0` unless a
//! name says otherwise (`_m`, `_um`, `_k`).

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod error;
pub mod gp;
pub mod localization;
pub mod materials;
pub mod numerics;
pub mod run;
pub mod superradiance;
mod sweep;
pub mod thermo;

pub use error::{Error, Result};
