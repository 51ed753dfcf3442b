//! Discretization of the fixed-energy scattering operator
//! (Ŝ_E u)(θ) = u(θ) − iπϰ^{d−2} ∫ f(ϰθ′, ϰθ) u(θ′) dθ′ on S^{d−1},
//! its singular spectrum, the kernel of Ŝ_E − 1, and unitarity checks.
//!
//! The discrete matrix is similarity-symmetrized with W = diag(√w_i) so
//! Euclidean singular values and unitarity coincide with the L²(S^{d−1})
//! notions; rank is invariant under the similarity.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::Dim;
use crate::linalg::{jacobi_svd, nullspace, spectral_norm};
use crate::multipoint::{solve_charges, ChargeSolution, MultipointPotential};
use crate::scattering::amplitude_f_with;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative threshold for numerical rank: three orders above round-off
/// accumulation at M ≤ 512, three below physical singular values.
pub const RANK_REL_THRESHOLD: f64 = 1e-8;

/// Smallest admissible circle rule.
pub const MIN_CIRCLE_NODES: usize = 8;

/// Cap on operator size (the SVD is dense one-sided Jacobi).
pub const MAX_OPERATOR_NODES: usize = 512;

/// Quadrature on S^{d−1}: counting measure on {±1} for d = 1, uniform
/// angles for d = 2, Gauss–Legendre polar cosine × uniform azimuth for d = 3.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    d: Dim,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn dim(&self) -> Dim {
        self.d
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Unit direction of node i, embedded in ℝ³.
    pub fn node(&self, i: usize) -> [f64; 3] {
        self.nodes[i]
    }

    /// Node i truncated to the d live components.
    pub fn node_dir(&self, i: usize) -> &[f64] {
        &self.nodes[i][..self.d.ambient()]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Gauss–Legendre nodes/weights on [−1, 1] by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre(p: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; p];
    let mut weights = vec![0.0; p];
    for i in 0..p {
        let mut x = (PI * (i as f64 + 0.75) / (p as f64 + 0.5)).cos();
        for _ in 0..100 {
            // evaluate P_p(x) and P_p'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=p {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = p as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // final derivative at the converged node
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=p {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = p as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Build the M-node rule. d=1 ignores M (always the two points ±1 with unit
/// weights); d=2 needs M ≥ 8; d=3 needs M = 2p² (polar count p, azimuth 2p).
pub fn build_quadrature(d: Dim, m: usize) -> Result<SphereQuadrature> {
    match d {
        Dim::One => Ok(SphereQuadrature {
            d,
            nodes: vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
            weights: vec![1.0, 1.0],
        }),
        Dim::Two => {
            if m < MIN_CIRCLE_NODES {
                return Err(Error::Precondition(format!(
                    "circle rule needs at least {MIN_CIRCLE_NODES} nodes, got {m}"
                )));
            }
            if m > MAX_OPERATOR_NODES {
                return Err(Error::Precondition(format!(
                    "node count {m} exceeds the {MAX_OPERATOR_NODES} cap"
                )));
            }
            let w = 2.0 * PI / m as f64;
            let mut nodes = Vec::with_capacity(m);
            for j in 0..m {
                let phi = 2.0 * PI * j as f64 / m as f64;
                nodes.push([phi.cos(), phi.sin(), 0.0]);
            }
            Ok(SphereQuadrature {
                d,
                nodes,
                weights: vec![w; m],
            })
        }
        Dim::Three => {
            // M = 2p²: p Gauss–Legendre polar levels × 2p uniform azimuths
            let p = ((m as f64 / 2.0).sqrt()).round() as usize;
            if p < 4 || 2 * p * p != m {
                return Err(Error::Precondition(format!(
                    "sphere rule needs M = 2p² with p >= 4 (32, 50, 72, ...), got {m}"
                )));
            }
            if m > MAX_OPERATOR_NODES {
                return Err(Error::Precondition(format!(
                    "node count {m} exceeds the {MAX_OPERATOR_NODES} cap"
                )));
            }
            let (ct, wt) = gauss_legendre(p);
            let m_az = 2 * p;
            let w_az = 2.0 * PI / m_az as f64;
            let mut nodes = Vec::with_capacity(m);
            let mut weights = Vec::with_capacity(m);
            for (cos_t, w_polar) in ct.iter().zip(&wt) {
                let sin_t = (1.0 - cos_t * cos_t).sqrt();
                for j in 0..m_az {
                    let phi = 2.0 * PI * j as f64 / m_az as f64;
                    nodes.push([sin_t * phi.cos(), sin_t * phi.sin(), *cos_t]);
                    weights.push(w_polar * w_az);
                }
            }
            Ok(SphereQuadrature { d, nodes, weights })
        }
    }
}

/// Charge solutions for plane waves incident from every quadrature node.
fn charges_per_node(
    pot: &MultipointPotential,
    kappa: f64,
    quad: &SphereQuadrature,
) -> Result<Vec<ChargeSolution>> {
    (0..quad.len())
        .map(|j| {
            let k: Vec<f64> = quad.node_dir(j).iter().map(|c| c * kappa).collect();
            solve_charges(pot, &k)
        })
        .collect()
}

/// The symmetrized M×M matrix S̃ = W S W^{−1},
/// S_{ij} = δ_{ij} − iπϰ^{d−2} w_j f(ϰθ_j, ϰθ_i).
pub fn build_soperator(
    pot: &MultipointPotential,
    e: f64,
    quad: &SphereQuadrature,
) -> Result<Array2<Complex64>> {
    if quad.dim() != pot.dim() {
        return Err(Error::Precondition(format!(
            "quadrature dimension {} does not match potential dimension {}",
            quad.dim(),
            pot.dim()
        )));
    }
    if !(e > 0.0) {
        return Err(Error::Domain(format!("energy must be positive, got {e}")));
    }
    let kappa = e.sqrt();
    let m = quad.len();
    let prefactor = -I * PI * kappa.powi(pot.dim().ambient() as i32 - 2);
    let sols = charges_per_node(pot, kappa, quad)?;
    let mut s = Array2::eye(m);
    for (j, sol) in sols.iter().enumerate() {
        let sqrt_wj = quad.weight(j).sqrt();
        for i in 0..m {
            let l: Vec<f64> = quad.node_dir(i).iter().map(|c| c * kappa).collect();
            let f = amplitude_f_with(pot, sol, &l)?;
            s[(i, j)] += prefactor * quad.weight(i).sqrt() * sqrt_wj * f;
        }
    }
    Ok(s)
}

/// Descending singular values of S̃ − I with the induced rank estimate.
#[derive(Debug, Clone)]
pub struct SingularSpectrumReport {
    pub sigma: Vec<f64>,
    pub rank_estimate: usize,
    pub threshold: f64,
    pub n_scatterers: usize,
}

/// Full SVD of S̃ − I (one-sided Jacobi); rank counts σ_i > threshold·σ₁.
pub fn singular_spectrum(
    s_tilde: &Array2<Complex64>,
    n_scatterers: usize,
) -> Result<SingularSpectrumReport> {
    let (rows, cols) = s_tilde.dim();
    if rows != cols {
        return Err(Error::Precondition(format!(
            "operator matrix must be square, got {rows}x{cols}"
        )));
    }
    let mut defect = s_tilde.clone();
    for i in 0..rows {
        defect[(i, i)] -= 1.0;
    }
    let svd = jacobi_svd(&defect)?;
    let s1 = svd.sigma.first().copied().unwrap_or(0.0);
    let rank_estimate = svd
        .sigma
        .iter()
        .filter(|&&s| s > RANK_REL_THRESHOLD * s1)
        .count();
    Ok(SingularSpectrumReport {
        sigma: svd.sigma,
        rank_estimate,
        threshold: RANK_REL_THRESHOLD,
        n_scatterers,
    })
}

/// Orthonormal basis of the kernel of Ŝ_E − 1 in symmetrized coordinates.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    /// M × dim matrix; columns are the basis vectors ũ = W u.
    pub basis: Array2<Complex64>,
    /// max over basis columns of ‖(S̃ − I)ũ‖ / ‖ũ‖.
    pub residual: f64,
    /// Numerical rank of the charge-sample matrix Q̃; generically n.
    pub rank_q: usize,
}

/// The kernel is built directly from its factorized structure: u lies in the
/// kernel iff Σ_j w_j q_m(ϰθ_j) u(θ_j) = 0 for m = 1..n, i.e. ũ ⊥ rows of
/// Q̃_{mj} = √w_j q_m(ϰθ_j). The basis therefore has dimension M − rank(Q̃).
pub fn kernel_basis(
    pot: &MultipointPotential,
    e: f64,
    quad: &SphereQuadrature,
) -> Result<KernelBasis> {
    if quad.dim() != pot.dim() {
        return Err(Error::Precondition(format!(
            "quadrature dimension {} does not match potential dimension {}",
            quad.dim(),
            pot.dim()
        )));
    }
    if !(e > 0.0) {
        return Err(Error::Domain(format!("energy must be positive, got {e}")));
    }
    let kappa = e.sqrt();
    let m = quad.len();
    let n = pot.len();
    let sols = charges_per_node(pot, kappa, quad)?;
    let mut q_tilde = Array2::zeros((n, m));
    for (j, sol) in sols.iter().enumerate() {
        let sqrt_w = quad.weight(j).sqrt();
        for mm in 0..n {
            q_tilde[(mm, j)] = sqrt_w * sol.q[mm];
        }
    }
    let svd = jacobi_svd(&q_tilde)?;
    let s1 = svd.sigma.first().copied().unwrap_or(0.0);
    let rank_q = svd
        .sigma
        .iter()
        .filter(|&&s| s > RANK_REL_THRESHOLD * s1)
        .count();
    let basis = nullspace(&q_tilde, RANK_REL_THRESHOLD)?;

    let s_tilde = build_soperator(pot, e, quad)?;
    let mut defect = s_tilde;
    for i in 0..m {
        defect[(i, i)] -= 1.0;
    }
    let mut residual = 0.0_f64;
    for col in 0..basis.dim().1 {
        let u: Array1<Complex64> = basis.column(col).to_owned();
        let du = defect.dot(&u);
        let norm_u = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let norm_du = du.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        residual = residual.max(norm_du / norm_u);
    }
    Ok(KernelBasis {
        basis,
        residual,
        rank_q,
    })
}

/// ‖S̃ᴴS̃ − I‖₂; zero for unitary S̃ (real α).
pub fn unitarity_defect(s_tilde: &Array2<Complex64>) -> Result<f64> {
    let (rows, cols) = s_tilde.dim();
    if rows != cols {
        return Err(Error::Precondition(format!(
            "operator matrix must be square, got {rows}x{cols}"
        )));
    }
    let mut gram = Array2::<Complex64>::zeros((rows, rows));
    for i in 0..rows {
        for j in 0..rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..rows {
                acc += s_tilde[(k, i)].conj() * s_tilde[(k, j)];
            }
            gram[(i, j)] = acc;
        }
    }
    for i in 0..rows {
        gram[(i, i)] -= 1.0;
    }
    spectral_norm(&gram)
}
