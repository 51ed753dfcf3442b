//! Outgoing (Sommerfeld) Green functions of the Helmholtz operator,
//! (Δ + E) G⁺ = δ, for d = 1, 2, 3, together with their local expansions
//! at the origin and far-field coefficients.
//!
//! The sign convention is the one that reproduces the diagonal entries of
//! the multipoint charge system (see `multipoint::assemble_matrix`).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::{check_embedded, norm3, Dim};
use crate::specfun::{hankel1_0, EULER_GAMMA};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Behaviour of G⁺ near the origin.
///
/// `singular_coeff` multiplies 1/r for d = 3 and ln r for d = 2; for d = 1
/// (where G⁺ is continuous) it holds the value at 0 instead. `regular_coeff`
/// is the constant term for d = 2, 3 and the derivative jump of e^{iκ|x|}
/// across 0 for d = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenLocalExpansion {
    pub singular_coeff: Complex64,
    pub regular_coeff: Complex64,
}

/// G⁺(r, E) as a function of the scalar distance r = |x|.
pub fn green_plus(d: Dim, r: f64, e: f64) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("green_plus requires r > 0, got {r}")));
    }
    if !(e > 0.0) {
        return Err(Error::Domain(format!("green_plus requires E > 0, got {e}")));
    }
    let kappa = e.sqrt();
    match d {
        Dim::One => Ok((I * kappa * r).exp() / (2.0 * I * kappa)),
        Dim::Two => Ok(-I / 4.0 * hankel1_0(kappa * r)?),
        Dim::Three => Ok(-(I * kappa * r).exp() / (4.0 * PI * r)),
    }
}

/// Coefficients of G⁺ near r = 0.
///
/// d = 3: G⁺ = −1/(4πr) − iκ/(4π) + O(r).
/// d = 2: G⁺ = (1/(2π)) ln r + [−i/4 + (ln(κ/2) + γ)/(2π)] + O(r² ln r).
/// d = 1: G⁺(0) = 1/(2iκ) and the derivative jump of e^{iκ|x|} is 2iκ.
pub fn green_local_expansion(d: Dim, e: f64) -> Result<GreenLocalExpansion> {
    if !(e > 0.0) {
        return Err(Error::Domain(format!(
            "green_local_expansion requires E > 0, got {e}"
        )));
    }
    let kappa = e.sqrt();
    Ok(match d {
        Dim::One => GreenLocalExpansion {
            singular_coeff: 1.0 / (2.0 * I * kappa),
            regular_coeff: 2.0 * I * kappa,
        },
        Dim::Two => GreenLocalExpansion {
            singular_coeff: Complex64::new(1.0 / (2.0 * PI), 0.0),
            regular_coeff: Complex64::new(
                ((kappa / 2.0).ln() + EULER_GAMMA) / (2.0 * PI),
                -0.25,
            ),
        },
        Dim::Three => GreenLocalExpansion {
            singular_coeff: Complex64::new(-1.0 / (4.0 * PI), 0.0),
            regular_coeff: -I * kappa / (4.0 * PI),
        },
    })
}

/// Coefficient a_d(κ) in G⁺(x − y) ≈ a_d(κ) e^{iκ|x|} |x|^{−(d−1)/2} e^{−iκ x̂·y}.
pub fn green_farfield_coeff(d: Dim, kappa: f64) -> Result<Complex64> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!(
            "green_farfield_coeff requires kappa > 0, got {kappa}"
        )));
    }
    Ok(match d {
        Dim::One => 1.0 / (2.0 * I * kappa),
        Dim::Two => {
            -I / 4.0 * (2.0 / (PI * kappa)).sqrt() * (-I * PI / 4.0).exp()
        }
        Dim::Three => Complex64::new(-1.0 / (4.0 * PI), 0.0),
    })
}

/// |(Δ_h + E) G⁺| at x, with Δ_h the centered second-difference Laplacian
/// over the d ambient axes. O(h²) away from the origin.
pub fn helmholtz_residual(d: Dim, x: [f64; 3], e: f64, h: f64) -> Result<f64> {
    check_embedded(d, x)?;
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let r = norm3(x);
    if r <= 10.0 * h {
        return Err(Error::Precondition(format!(
            "stencil too close to the singularity: |x| = {r:.3e} <= 10h = {:.3e}",
            10.0 * h
        )));
    }
    let g = |p: [f64; 3]| green_plus(d, norm3(p), e);
    let center = g(x)?;
    let mut laplacian = Complex64::new(0.0, 0.0);
    for axis in 0..d.ambient() {
        let mut plus = x;
        plus[axis] += h;
        let mut minus = x;
        minus[axis] -= h;
        laplacian += (g(plus)? - 2.0 * center + g(minus)?) / (h * h);
    }
    Ok((laplacian + e * center).norm())
}
