//! Dense complex linear algebra: LU solves with partial pivoting for the
//! charge systems (n ≤ 64) and a one-sided Jacobi SVD for the discretized
//! scattering operators (M ≤ 512).
//!
//! Jacobi is used deliberately: it delivers high relative accuracy for the
//! small singular values, which are exactly what the rank checks inspect.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gram tolerance for Jacobi convergence: a column pair counts as orthogonal
/// when |⟨b_p, b_q⟩| ≤ tol·‖b_p‖‖b_q‖.
pub const JACOBI_GRAM_TOL: f64 = 1e-14;

/// Sweep cap; exceeding it reports a numerical error instead of looping.
pub const JACOBI_MAX_SWEEPS: usize = 60;

/// LU factorization with partial pivoting, PA = LU packed in place.
pub struct Lu {
    lu: Array2<Complex64>,
    piv: Vec<usize>,
    n: usize,
}

pub fn lu_factor(a: &Array2<Complex64>) -> Result<Lu> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::Precondition(format!(
            "LU needs a square matrix, got {rows}x{cols}"
        )));
    }
    let n = rows;
    let mut lu = a.clone();
    let mut piv = Vec::with_capacity(n);
    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].norm();
        for i in k + 1..n {
            let cand = lu[(i, k)].norm();
            if cand > best {
                best = cand;
                p = i;
            }
        }
        if best == 0.0 {
            return Err(Error::Numerical(format!(
                "singular matrix: zero pivot at column {k}"
            )));
        }
        piv.push(p);
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
        }
        let inv_pivot = 1.0 / lu[(k, k)];
        for i in k + 1..n {
            let m = lu[(i, k)] * inv_pivot;
            lu[(i, k)] = m;
            for j in k + 1..n {
                let adj = m * lu[(k, j)];
                lu[(i, j)] -= adj;
            }
        }
    }
    Ok(Lu { lu, piv, n })
}

impl Lu {
    pub fn solve(&self, b: &Array1<Complex64>) -> Array1<Complex64> {
        assert_eq!(b.len(), self.n, "rhs length mismatch");
        let mut x = b.clone();
        for k in 0..self.n {
            x.swap(k, self.piv[k]);
        }
        // forward: L y = Pb (unit lower triangle)
        for i in 1..self.n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        // backward: U x = y
        for i in (0..self.n).rev() {
            let mut acc = x[i];
            for j in i + 1..self.n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }
}

/// Solve with one step of iterative refinement; returns (x, ‖Ax − b‖∞).
pub fn solve_refined(
    a: &Array2<Complex64>,
    lu: &Lu,
    b: &Array1<Complex64>,
) -> (Array1<Complex64>, f64) {
    let mut x = lu.solve(b);
    let r = residual(a, &x, b);
    let dx = lu.solve(&r);
    x += &dx;
    let r = residual(a, &x, b);
    (x, norm_inf(&r))
}

fn residual(
    a: &Array2<Complex64>,
    x: &Array1<Complex64>,
    b: &Array1<Complex64>,
) -> Array1<Complex64> {
    b - &a.dot(x)
}

pub fn norm_inf(v: &Array1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn matrix_norm_1(a: &Array2<Complex64>) -> f64 {
    let (_, n) = a.dim();
    (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Exact 1-norm condition number via the explicit inverse (fine at n ≤ 64:
/// the inverse columns are n extra solves against the existing factors).
pub fn cond_1norm(a: &Array2<Complex64>, lu: &Lu) -> f64 {
    let n = lu.n;
    if n == 0 {
        return 1.0;
    }
    let mut inv_norm = 0.0_f64;
    let mut e = Array1::zeros(n);
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        let col = lu.solve(&e);
        inv_norm = inv_norm.max(col.iter().map(|z| z.norm()).sum());
        e[j] = Complex64::new(0.0, 0.0);
    }
    matrix_norm_1(a) * inv_norm
}

/// Thin SVD A = U diag(σ) Vᴴ with σ descending. For rank-deficient A the
/// U columns belonging to σ = 0 are zero vectors, not completed to a basis.
pub struct Svd {
    pub u: Array2<Complex64>,
    pub sigma: Vec<f64>,
    pub v: Array2<Complex64>,
}

/// One-sided Jacobi SVD: unitary column rotations until all column pairs of
/// the working matrix are orthogonal; V accumulates the rotations, so
/// A V = U Σ exactly (up to round-off) at every stage.
pub fn jacobi_svd(a: &Array2<Complex64>) -> Result<Svd> {
    let (m, n) = a.dim();
    let mut b: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j).to_vec()).collect();
    // columns that collapse below round-off relative to ‖A‖_F are numerically
    // zero; refining their directions is meaningless and stalls convergence
    let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let dead_floor = (fro * 1e-15).powi(2);
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            col[j] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();

    let mut converged = n < 2;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for (bp, bq) in b[p].iter().zip(&b[q]) {
                    alpha += bp.norm_sqr();
                    beta += bq.norm_sqr();
                    gamma += bp.conj() * bq;
                }
                if alpha <= dead_floor
                    || beta <= dead_floor
                    || gamma.norm() <= JACOBI_GRAM_TOL * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                // phase-align column q, then a real Jacobi rotation that
                // annihilates the Gram off-diagonal
                let phase = Complex64::from_polar(1.0, -gamma.arg());
                let zeta = (beta - alpha) / (2.0 * gamma.norm());
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (bl, br) = b.split_at_mut(q);
                for (bp, bq) in bl[p].iter_mut().zip(br[0].iter_mut()) {
                    let (x, y) = (*bp, phase * *bq);
                    *bp = c * x - s * y;
                    *bq = s * x + c * y;
                }
                let (vl, vr) = v.split_at_mut(q);
                for (vp, vq) in vl[p].iter_mut().zip(vr[0].iter_mut()) {
                    let (x, y) = (*vp, phase * *vq);
                    *vp = c * x - s * y;
                    *vq = s * x + c * y;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi SVD did not converge within {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sigmas: Vec<f64> = b
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| sigmas[j].partial_cmp(&sigmas[i]).unwrap());

    let mut u = Array2::zeros((m, n));
    let mut vv = Array2::zeros((n, n));
    let mut sigma = Vec::with_capacity(n);
    for (slot, &j) in order.iter().enumerate() {
        let s = sigmas[j];
        sigma.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, slot)] = b[j][i] / s;
            }
        }
        for i in 0..n {
            vv[(i, slot)] = v[j][i];
        }
    }
    Ok(Svd { u, sigma, v: vv })
}

/// Orthonormal basis (as matrix columns) of {x : Ax = 0}, singular vectors
/// with σ ≤ rel_tol·σ₁.
pub fn nullspace(a: &Array2<Complex64>, rel_tol: f64) -> Result<Array2<Complex64>> {
    let svd = jacobi_svd(a)?;
    let n = a.dim().1;
    let s1 = svd.sigma.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..n).filter(|&j| svd.sigma[j] <= rel_tol * s1).collect();
    let mut basis = Array2::zeros((n, keep.len()));
    for (slot, &j) in keep.iter().enumerate() {
        for i in 0..n {
            basis[(i, slot)] = svd.v[(i, j)];
        }
    }
    Ok(basis)
}

/// Largest singular value.
pub fn spectral_norm(a: &Array2<Complex64>) -> Result<f64> {
    Ok(jacobi_svd(a)?.sigma.first().copied().unwrap_or(0.0))
}
