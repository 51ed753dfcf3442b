//! Exactly solvable quantum scattering off finitely many zero-range
//! (multipoint) scatterers in dimensions 1, 2, 3.

// `!(x > 0.0)` guards are load-bearing: they send NaN into the error path,
// which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference values are written with their full source precision even where
// that exceeds f64.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod geom;
pub mod greens;
pub mod interior;
pub mod linalg;
pub mod multipoint;
pub mod scattering;
pub mod soliton1d;
pub mod soperator;
pub mod specfun;

pub use error::{Error, Result};
pub use geom::Dim;

/// Crate version, exposed for run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
