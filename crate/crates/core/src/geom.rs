//! Ambient dimension tag and small fixed-size vector helpers.
//!
//! Positions, wave vectors, and directions are stored as `[f64; 3]` with
//! unused trailing components required to be zero, so the same dot/norm
//! code serves d = 1, 2, 3.

use crate::error::{Error, Result};

/// Ambient dimension of the scattering problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    Two,
    Three,
}

impl Dim {
    pub fn ambient(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(Error::Domain(format!("dimension must be 1, 2, or 3, got {d}"))),
        }
    }

    /// Total measure of the unit sphere S^{d-1}: counting measure 2 on
    /// {-1, +1} for d = 1, circumference 2*pi for d = 2, area 4*pi for d = 3.
    pub fn sphere_measure(self) -> f64 {
        match self {
            Dim::One => 2.0,
            Dim::Two => 2.0 * std::f64::consts::PI,
            Dim::Three => 4.0 * std::f64::consts::PI,
        }
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.ambient())
    }
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale3(s: f64, a: [f64; 3]) -> [f64; 3] {
    [s * a[0], s * a[1], s * a[2]]
}

/// Builds a padded `[f64; 3]` from exactly `d` components.
pub fn vec_from_components(d: Dim, c: &[f64]) -> Result<[f64; 3]> {
    if c.len() != d.ambient() {
        return Err(Error::Domain(format!(
            "expected {} vector components for d = {}, got {}",
            d.ambient(),
            d,
            c.len()
        )));
    }
    let mut v = [0.0; 3];
    v[..c.len()].copy_from_slice(c);
    Ok(v)
}

/// Checks that the trailing components beyond dimension `d` vanish.
pub fn check_embedded(d: Dim, v: [f64; 3]) -> Result<()> {
    for (i, &c) in v.iter().enumerate().skip(d.ambient()) {
        if c != 0.0 {
            return Err(Error::Domain(format!(
                "component {i} must be zero for a d = {d} vector, got {c}"
            )));
        }
    }
    Ok(())
}
