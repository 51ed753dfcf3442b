//! The scattering solution ψ⁺(x, k) = e^{ikx} + Σ q_j G⁺(x − y_j, |k|²),
//! the amplitudes f and f⁺ = c(d,|k|)·f, and numerical far-field extraction
//! used to validate the amplitude formulas end to end.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::{norm3, scale3, sub3, vec_from_components, Dim};
use crate::greens::green_plus;
use crate::multipoint::{solve_charges, ChargeSolution, MultipointPotential};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance for the on-shell condition |k| = |l|.
pub const ON_SHELL_REL_TOL: f64 = 1e-12;

/// One on-shell amplitude evaluation: f and its normalized companion
/// f⁺ = c(d,|k|)·f.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSample {
    pub k: Vec<f64>,
    pub l: Vec<f64>,
    pub f: Complex64,
    pub fplus: Complex64,
}

/// c(d, κ) = −πi(−2πi)^{(d−1)/2} κ^{(d−3)/2} with √(−2πi) = √(2π)e^{−iπ/4}:
/// c(1,κ) = −πi/κ; c(2,κ) = −πi√(2π)e^{−iπ/4}/√κ; c(3,κ) = −2π².
pub fn normalization_c(d: Dim, kappa: f64) -> Result<Complex64> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!(
            "normalization_c requires kappa > 0, got {kappa}"
        )));
    }
    let root = (2.0 * PI).sqrt() * (-I * PI / 4.0).exp(); // √(−2πi)
    Ok(match d {
        Dim::One => -PI * I / kappa,
        Dim::Two => -PI * I * root / kappa.sqrt(),
        Dim::Three => -PI * I * root * root,
    })
}

fn vector_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn on_shell_check(kappa: f64, l: &[f64], d: Dim) -> Result<f64> {
    if l.len() != d.ambient() {
        return Err(Error::Precondition(format!(
            "outgoing vector has {} components, dimension is {d}",
            l.len()
        )));
    }
    let kl = vector_norm(l);
    if (kl - kappa).abs() > ON_SHELL_REL_TOL * kappa {
        return Err(Error::Domain(format!(
            "off-shell amplitude: |l| = {kl:.15e} but |k| = {kappa:.15e}"
        )));
    }
    Ok(kl)
}

fn phase_dot(k: &[f64], y: &[f64]) -> f64 {
    k.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// ψ⁺ evaluated with pre-solved charges.
pub fn psi_plus_with(
    pot: &MultipointPotential,
    sol: &ChargeSolution,
    x: &[f64],
) -> Result<Complex64> {
    let x3 = vec_from_components(pot.dim(), x)?;
    let e = sol.kappa * sol.kappa;
    let mut psi = (I * phase_dot(&sol.k, x)).exp();
    for j in 0..pot.len() {
        let r = norm3(sub3(x3, pot.position3(j)?));
        if r == 0.0 {
            return Err(Error::Domain(format!(
                "psi_plus evaluated at scatterer position {j}"
            )));
        }
        psi += sol.q[j] * green_plus(pot.dim(), r, e)?;
    }
    Ok(psi)
}

/// ψ⁺(x, k); solves the charge system internally.
pub fn psi_plus(pot: &MultipointPotential, k: &[f64], x: &[f64]) -> Result<Complex64> {
    let sol = solve_charges(pot, k)?;
    psi_plus_with(pot, &sol, x)
}

/// f(k, l) = (2π)^{−d} Σ_j q_j(k) e^{−i l·y_j} with pre-solved charges.
pub fn amplitude_f_with(
    pot: &MultipointPotential,
    sol: &ChargeSolution,
    l: &[f64],
) -> Result<Complex64> {
    on_shell_check(sol.kappa, l, pot.dim())?;
    let scale = (2.0 * PI).powi(pot.dim().ambient() as i32);
    let mut f = Complex64::new(0.0, 0.0);
    for (j, s) in pot.scatterers().iter().enumerate() {
        f += sol.q[j] * (-I * phase_dot(l, s.position())).exp();
    }
    Ok(f / scale)
}

/// On-shell amplitude f(k, l); |k| = |l| enforced to 1e−12 relative.
pub fn amplitude_f(pot: &MultipointPotential, k: &[f64], l: &[f64]) -> Result<Complex64> {
    let sol = solve_charges(pot, k)?;
    amplitude_f_with(pot, &sol, l)
}

/// The pair (f, f⁺) at one on-shell (k, l).
pub fn amplitude_fplus(
    pot: &MultipointPotential,
    k: &[f64],
    l: &[f64],
) -> Result<AmplitudeSample> {
    let sol = solve_charges(pot, k)?;
    let f = amplitude_f_with(pot, &sol, l)?;
    let c = normalization_c(pot.dim(), sol.kappa)?;
    Ok(AmplitudeSample {
        k: k.to_vec(),
        l: l.to_vec(),
        f,
        fplus: c * f,
    })
}

fn farfield_preconditions(
    pot: &MultipointPotential,
    kappa: f64,
    theta: &[f64],
    r: f64,
) -> Result<()> {
    if theta.len() != pot.dim().ambient() {
        return Err(Error::Precondition(format!(
            "direction has {} components, dimension is {}",
            theta.len(),
            pot.dim()
        )));
    }
    if (vector_norm(theta) - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "direction must be a unit vector, |theta| = {:.15e}",
            vector_norm(theta)
        )));
    }
    let mut max_y = 0.0_f64;
    for j in 0..pot.len() {
        max_y = max_y.max(norm3(pot.position3(j)?));
    }
    if r < 100.0 * max_y || r < 100.0 / kappa {
        return Err(Error::Precondition(format!(
            "R = {r:.3e} too small: need R >= {:.3e} and R >= {:.3e}",
            100.0 * max_y,
            100.0 / kappa
        )));
    }
    Ok(())
}

/// Numerical extraction (ψ⁺(Rθ) − e^{ik·Rθ})·R^{(d−1)/2}·e^{−iκR}; tends to
/// f⁺(k, κθ) with O(1/R) error.
pub fn farfield_extract(
    pot: &MultipointPotential,
    k: &[f64],
    theta: &[f64],
    r: f64,
) -> Result<Complex64> {
    let sol = solve_charges(pot, k)?;
    farfield_extract_with(pot, &sol, theta, r)
}

fn farfield_extract_with(
    pot: &MultipointPotential,
    sol: &ChargeSolution,
    theta: &[f64],
    r: f64,
) -> Result<Complex64> {
    farfield_preconditions(pot, sol.kappa, theta, r)?;
    let theta3 = vec_from_components(pot.dim(), theta)?;
    let x3 = scale3(r, theta3);
    let x = &x3[..pot.dim().ambient()];
    let scattered = psi_plus_with(pot, sol, x)? - (I * phase_dot(&sol.k, x)).exp();
    let power = (pot.dim().ambient() as f64 - 1.0) / 2.0;
    Ok(scattered * r.powf(power) * (-I * sol.kappa * r).exp())
}

/// Richardson pair at radii R and 2R: returns the extrapolated limit and the
/// constant C of the |error| ≤ C/R model fitted from the two extractions.
pub fn farfield_richardson(
    pot: &MultipointPotential,
    k: &[f64],
    theta: &[f64],
    r: f64,
) -> Result<(Complex64, f64)> {
    let sol = solve_charges(pot, k)?;
    let f_r = farfield_extract_with(pot, &sol, theta, r)?;
    let f_2r = farfield_extract_with(pot, &sol, theta, 2.0 * r)?;
    let extrapolated = 2.0 * f_2r - f_r;
    let c = 2.0 * r * (f_r - f_2r).norm();
    Ok((extrapolated, c))
}
