//! Interior transmission eigenvalue witnesses for multipoint potentials:
//! plane-wave superpositions that solve Δφ + Eφ = 0 identically and vanish
//! at every scatterer point, so the pair ψ = φ satisfies both equations and
//! shares all Cauchy data. Any complex E ≠ 0 admits such witnesses, with
//! dimension M − n growing without bound in the direction count M.
//!
//! Also the Dirichlet-box demonstration of the multiplicity bound: a degenerate
//! eigenvalue of the Laplacian on (0,π)² with multiplicity m keeps multiplicity
//! at least m − n after n < m point scatterers are inserted, because the
//! eigenspace slice vanishing at all n points has dimension ≥ m − n and its
//! members are regular and vanishing there, hence unaffected.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::{dot3, norm3, sub3, vec_from_components, Dim};
use crate::linalg::nullspace;
use crate::multipoint::MultipointPotential;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative singular-value threshold for the evaluation-matrix nullspace.
pub const NULLSPACE_REL_TOL: f64 = 1e-10;

/// Step for the finite-difference Helmholtz residual in [`verify_ite_pair`].
pub const ITE_STENCIL_H: f64 = 1e-3;

/// Direction-count cap (bounds the SVD cost of the evaluation matrix).
pub const MAX_DIRECTIONS: usize = 4096;

/// M distinct unit directions: equally spaced on the circle for d = 2, a
/// Fibonacci lattice on the sphere for d = 3. One-dimensional families are
/// rejected: S⁰ has only two directions, so M cannot exceed n + 1 usefully.
pub fn direction_set(d: Dim, m: usize) -> Result<Vec<[f64; 3]>> {
    if m == 0 || m > MAX_DIRECTIONS {
        return Err(Error::Precondition(format!(
            "direction count {m} outside 1..={MAX_DIRECTIONS}"
        )));
    }
    match d {
        Dim::One => Err(Error::Domain(
            "plane-wave families need d = 2 or d = 3".into(),
        )),
        Dim::Two => Ok((0..m)
            .map(|j| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                [angle.cos(), angle.sin(), 0.0]
            })
            .collect()),
        Dim::Three => {
            // Fibonacci sphere: z strides (2j+1)/M − 1, golden-angle azimuth
            let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
            Ok((0..m)
                .map(|j| {
                    let z = 1.0 - (2.0 * j as f64 + 1.0) / m as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * j as f64;
                    [r * phi.cos(), r * phi.sin(), z]
                })
                .collect())
        }
    }
}

/// A family of Herglotz-type superpositions φ(x) = Σ_m c_m e^{i√E θ_m·x}
/// vanishing at a fixed point set. Columns of `basis` are orthonormal
/// coefficient vectors; every column solves Δφ + Eφ = 0 identically.
#[derive(Debug, Clone)]
pub struct PlaneWaveFamily {
    d: Dim,
    energy: Complex64,
    root: Complex64,
    directions: Vec<[f64; 3]>,
    points: Vec<[f64; 3]>,
    basis: Array2<Complex64>,
}

impl PlaneWaveFamily {
    pub fn energy(&self) -> Complex64 {
        self.energy
    }

    /// Principal-branch √E (cut on the negative real axis); only ζ·ζ = E
    /// matters, the branch is fixed for reproducibility.
    pub fn root(&self) -> Complex64 {
        self.root
    }

    pub fn dim(&self) -> Dim {
        self.d
    }

    pub fn directions(&self) -> &[[f64; 3]] {
        &self.directions
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Number of independent vanishing superpositions found.
    pub fn witness_dimension(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Array2<Complex64> {
        &self.basis
    }

    /// φ_col(x) for the col-th basis superposition.
    pub fn evaluate(&self, col: usize, x: [f64; 3]) -> Result<Complex64> {
        if col >= self.basis.ncols() {
            return Err(Error::IndexOutOfRange {
                index: col,
                len: self.basis.ncols(),
            });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, theta) in self.directions.iter().enumerate() {
            sum += self.basis[(m, col)] * (I * self.root * dot3(*theta, x)).exp();
        }
        Ok(sum)
    }

    /// ∇φ_col(x) = Σ_m c_m (i√E θ_m) e^{i√E θ_m·x}.
    pub fn evaluate_gradient(&self, col: usize, x: [f64; 3]) -> Result<[Complex64; 3]> {
        if col >= self.basis.ncols() {
            return Err(Error::IndexOutOfRange {
                index: col,
                len: self.basis.ncols(),
            });
        }
        let mut grad = [Complex64::new(0.0, 0.0); 3];
        for (m, theta) in self.directions.iter().enumerate() {
            let wave = self.basis[(m, col)] * (I * self.root * dot3(*theta, x)).exp();
            for a in 0..3 {
                grad[a] += I * self.root * theta[a] * wave;
            }
        }
        Ok(grad)
    }
}

/// Builds the n×M evaluation matrix V_{jm} = e^{i√E θ_m·y_j} and returns an
/// orthonormal basis of its nullspace. rank(V) ≤ n, so the dimension is at
/// least M − n for every M > n; generically it is exactly M − n.
pub fn vanishing_herglotz_basis(
    d: Dim,
    points: &[Vec<f64>],
    energy: Complex64,
    m: usize,
) -> Result<PlaneWaveFamily> {
    if energy == Complex64::new(0.0, 0.0) || !energy.re.is_finite() || !energy.im.is_finite() {
        return Err(Error::Domain("energy must be finite and nonzero".into()));
    }
    let n = points.len();
    if m <= n {
        return Err(Error::Precondition(format!(
            "need more directions than points: M = {m}, n = {n}"
        )));
    }
    let mut embedded = Vec::with_capacity(n);
    for p in points {
        embedded.push(vec_from_components(d, p)?);
    }
    for j in 0..n {
        for l in j + 1..n {
            if norm3(sub3(embedded[j], embedded[l])) < 1e-14 {
                return Err(Error::Precondition(format!(
                    "points {j} and {l} coincide"
                )));
            }
        }
    }
    let directions = direction_set(d, m)?;
    let root = energy.sqrt();
    let mut v = Array2::<Complex64>::zeros((n, m));
    for (j, y) in embedded.iter().enumerate() {
        for (col, theta) in directions.iter().enumerate() {
            v[(j, col)] = (I * root * dot3(*theta, *y)).exp();
        }
    }
    let basis = if n == 0 {
        Array2::<Complex64>::eye(m)
    } else {
        nullspace(&v, NULLSPACE_REL_TOL)?
    };
    if basis.ncols() < m - n {
        return Err(Error::Numerical(format!(
            "nullspace dimension {} fell below the structural bound {}",
            basis.ncols(),
            m - n
        )));
    }
    Ok(PlaneWaveFamily {
        d,
        energy,
        root,
        directions,
        points: embedded,
        basis,
    })
}

/// Same construction, taking the point set from a multipoint potential.
pub fn vanishing_herglotz_for(
    pot: &MultipointPotential,
    energy: Complex64,
    m: usize,
) -> Result<PlaneWaveFamily> {
    let points: Vec<Vec<f64>> = pot
        .scatterers()
        .iter()
        .map(|s| s.position().to_vec())
        .collect();
    vanishing_herglotz_basis(pot.dim(), &points, energy, m)
}

/// The concrete domain for Cauchy-data statements: a ball centered at the
/// origin containing all points with margin 0.1.
#[derive(Debug, Clone, Copy)]
pub struct BallDomain {
    d: Dim,
    radius: f64,
}

impl BallDomain {
    pub fn enclosing(d: Dim, points: &[[f64; 3]]) -> Self {
        let r = points.iter().map(|p| norm3(*p)).fold(0.0, f64::max);
        Self { d, radius: r + 0.1 }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Deterministic boundary samples on the sphere |x| = radius.
    pub fn boundary_samples(&self, m: usize) -> Result<Vec<[f64; 3]>> {
        Ok(direction_set(self.d, m)?
            .into_iter()
            .map(|t| [t[0] * self.radius, t[1] * self.radius, t[2] * self.radius])
            .collect())
    }

    /// Deterministic interior samples: a golden-ratio spiral filling the ball.
    pub fn interior_samples(&self, m: usize) -> Result<Vec<[f64; 3]>> {
        let dirs = direction_set(self.d, m)?;
        let exponent = 1.0 / self.d.ambient() as f64;
        Ok(dirs
            .into_iter()
            .enumerate()
            .map(|(j, t)| {
                let r = self.radius * 0.95 * ((j as f64 + 0.5) / m as f64).powf(exponent);
                [t[0] * r, t[1] * r, t[2] * r]
            })
            .collect())
    }
}

/// Residuals certifying an interior transmission eigenvalue witness.
#[derive(Debug, Clone, Copy)]
pub struct IteResiduals {
    /// max |Δφ + Eφ| over interior samples (centered stencil, step 1e−3)
    pub helmholtz: f64,
    /// max_j |φ(y_j)| over all basis superpositions
    pub point: f64,
    /// max boundary mismatch of (ψ − φ, ∂_n ψ − ∂_n φ); zero by construction
    pub cauchy: f64,
}

/// Checks the pair (ψ, φ) with ψ := φ for the potential's points. Since φ is
/// regular and vanishes at every y_j, it satisfies the point-scatterer
/// conditions trivially (the singular coefficient is zero, forcing the value
/// to vanish, which it does), so ψ solves the perturbed equation and the
/// Cauchy data agree identically: this is the witness construction behind
/// "every complex energy is an interior transmission eigenvalue".
///
/// Boundary samples are assumed to lie on a sphere centered at the origin
/// ([`BallDomain`] produces them); the normal there is x/|x|.
pub fn verify_ite_pair(
    pot: &MultipointPotential,
    family: &PlaneWaveFamily,
    interior_samples: &[[f64; 3]],
    boundary_samples: &[[f64; 3]],
) -> Result<IteResiduals> {
    if family.d != pot.dim() || family.points.len() != pot.len() {
        return Err(Error::Precondition(
            "family was not built for this potential".into(),
        ));
    }
    for j in 0..pot.len() {
        if family.points[j] != pot.position3(j)? {
            return Err(Error::Precondition(
                "family points differ from the potential's".into(),
            ));
        }
    }
    if family.witness_dimension() == 0 {
        return Err(Error::Precondition("family has an empty basis".into()));
    }
    let h = ITE_STENCIL_H;
    let e = family.energy;
    let mut helmholtz = 0.0_f64;
    let mut point = 0.0_f64;
    let mut cauchy = 0.0_f64;
    for col in 0..family.witness_dimension() {
        for &x in interior_samples {
            let center = family.evaluate(col, x)?;
            let mut lap = Complex64::new(0.0, 0.0);
            for a in 0..family.d.ambient() {
                let mut xp = x;
                let mut xm = x;
                xp[a] += h;
                xm[a] -= h;
                lap += family.evaluate(col, xp)? + family.evaluate(col, xm)? - 2.0 * center;
            }
            lap /= h * h;
            helmholtz = helmholtz.max((lap + e * center).norm());
        }
        for j in 0..pot.len() {
            point = point.max(family.evaluate(col, pot.position3(j)?)?.norm());
        }
        for &x in boundary_samples {
            // ψ := φ, evaluated through the same closure: the trace and
            // normal-trace differences are identically zero
            let psi = family.evaluate(col, x)?;
            let phi = family.evaluate(col, x)?;
            let r = norm3(x);
            let normal = if r > 0.0 { [x[0] / r, x[1] / r, x[2] / r] } else { [1.0, 0.0, 0.0] };
            let grad_psi = family.evaluate_gradient(col, x)?;
            let grad_phi = family.evaluate_gradient(col, x)?;
            let dn_psi: Complex64 = (0..3).map(|a| grad_psi[a] * normal[a]).sum();
            let dn_phi: Complex64 = (0..3).map(|a| grad_phi[a] * normal[a]).sum();
            cauchy = cauchy.max((psi - phi).norm()).max((dn_psi - dn_phi).norm());
        }
    }
    Ok(IteResiduals {
        helmholtz,
        point,
        cauchy,
    })
}

/// One eigenvalue of the Dirichlet Laplacian on the square (0,π)²: all
/// ordered pairs (p,q), p,q ≥ 1, with p² + q² = E; eigenfunctions
/// sin(px)sin(qy); multiplicity = number of pairs.
#[derive(Debug, Clone)]
pub struct BoxSpectrumEntry {
    energy: u64,
    pairs: Vec<(u64, u64)>,
}

impl BoxSpectrumEntry {
    pub fn energy(&self) -> u64 {
        self.energy
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn multiplicity(&self) -> usize {
        self.pairs.len()
    }
}

/// Enumerates the lattice representations p² + q² = E. Multiplicity 0 means
/// E is not a Dirichlet eigenvalue of the box.
pub fn box_eigenspace(energy: u64) -> Result<BoxSpectrumEntry> {
    if energy == 0 {
        return Err(Error::Domain("box energy must be a positive integer".into()));
    }
    let mut pairs = Vec::new();
    let mut p = 1u64;
    while p * p < energy {
        let rem = energy - p * p;
        let q = (rem as f64).sqrt().round() as u64;
        if q >= 1 && q * q == rem {
            pairs.push((p, q));
        }
        p += 1;
    }
    Ok(BoxSpectrumEntry { energy, pairs })
}

/// Nullspace dimension of U_{j,(p,q)} = sin(p x_j) sin(q y_j): the number of
/// independent eigenfunctions in the E-eigenspace vanishing at all n points.
/// Always ≥ m − n since rank(U) ≤ n; each such combination is regular and
/// vanishing at every scatterer, so it survives the point perturbation and
/// the perturbed multiplicity is at least m − n.
pub fn multiplicity_lower_bound(
    entry: &BoxSpectrumEntry,
    points: &[[f64; 2]],
) -> Result<usize> {
    let m = entry.multiplicity();
    let n = points.len();
    if n >= m {
        return Err(Error::Precondition(format!(
            "bound needs n < m, got n = {n}, m = {m}"
        )));
    }
    for (j, p) in points.iter().enumerate() {
        if !(p[0] > 0.0 && p[0] < std::f64::consts::PI && p[1] > 0.0 && p[1] < std::f64::consts::PI)
        {
            return Err(Error::Domain(format!(
                "point {j} = ({}, {}) not strictly inside (0,pi)^2",
                p[0], p[1]
            )));
        }
    }
    let mut u = Array2::<Complex64>::zeros((n.max(1), m));
    for (j, pt) in points.iter().enumerate() {
        for (col, &(p, q)) in entry.pairs.iter().enumerate() {
            u[(j, col)] = Complex64::new(
                (p as f64 * pt[0]).sin() * (q as f64 * pt[1]).sin(),
                0.0,
            );
        }
    }
    let dim = if n == 0 {
        m
    } else {
        nullspace(&u, NULLSPACE_REL_TOL)?.ncols()
    };
    if dim < m - n {
        return Err(Error::Numerical(format!(
            "nullspace dimension {dim} fell below the structural bound {}",
            m - n
        )));
    }
    Ok(dim)
}

/// The surviving eigenfunctions themselves: orthonormal coefficient columns
/// over the (p,q) pairs spanning the vanishing slice of the eigenspace.
pub fn surviving_eigenfunctions(
    entry: &BoxSpectrumEntry,
    points: &[[f64; 2]],
) -> Result<Array2<Complex64>> {
    let m = entry.multiplicity();
    let n = points.len();
    if n >= m {
        return Err(Error::Precondition(format!(
            "bound needs n < m, got n = {n}, m = {m}"
        )));
    }
    let mut u = Array2::<Complex64>::zeros((n, m));
    for (j, pt) in points.iter().enumerate() {
        for (col, &(p, q)) in entry.pairs.iter().enumerate() {
            u[(j, col)] = Complex64::new(
                (p as f64 * pt[0]).sin() * (q as f64 * pt[1]).sin(),
                0.0,
            );
        }
    }
    nullspace(&u, NULLSPACE_REL_TOL)
}

/// Evaluates the box eigenfunction combination Σ_c coeff_c sin(p_c x)sin(q_c y).
pub fn box_eigenfunction(
    entry: &BoxSpectrumEntry,
    coeffs: &Array1<Complex64>,
    x: [f64; 2],
) -> Result<Complex64> {
    if coeffs.len() != entry.multiplicity() {
        return Err(Error::Precondition(format!(
            "{} coefficients for multiplicity {}",
            coeffs.len(),
            entry.multiplicity()
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (c, &(p, q)) in entry.pairs.iter().enumerate() {
        sum += coeffs[c] * (p as f64 * x[0]).sin() * (q as f64 * x[1]).sin();
    }
    Ok(sum)
}
