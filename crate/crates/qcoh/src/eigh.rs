//! Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! The matrices here are tiny (side <= 64 in practice), so a complex Jacobi
//! sweep is competitive with anything fancier and has the advantage of
//! unconditional numerical stability: every update is a unitary similarity.
//! Convergence is quadratic once the off-diagonal mass is small; a handful
//! of sweeps suffices at these sizes.

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    /// Rebuilds `V diag(lambda) V^dag`; useful for reconstruction checks.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Relative off-diagonal target: converged when
/// `offdiag_frobenius <= JACOBI_TOL * frobenius`.
const JACOBI_TOL: f64 = 1e-12;

const DEFAULT_MAX_SWEEPS: usize = 100;

/// Diagonalizes a Hermitian matrix. The input is symmetrized first, so
/// anti-Hermitian noise up to the caller's validation tolerance is ignored.
pub fn eigh(a: &CMatrix) -> Result<Spectrum> {
    eigh_with_max_sweeps(a, DEFAULT_MAX_SWEEPS)
}

pub fn eigh_with_max_sweeps(a: &CMatrix, max_sweeps: usize) -> Result<Spectrum> {
    assert!(a.is_square(), "eigh needs a square matrix");
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    if n <= 1 {
        return Ok(sorted_spectrum(&m, v));
    }

    let mut residual = off_diagonal_norm(&m);
    for _sweep in 0..max_sweeps {
        if residual <= JACOBI_TOL * scale {
            return Ok(sorted_spectrum(&m, v));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        residual = off_diagonal_norm(&m);
    }

    if residual <= JACOBI_TOL * scale {
        return Ok(sorted_spectrum(&m, v));
    }
    Err(Error::NoConvergence {
        sweeps: max_sweeps,
        residual,
    })
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.rows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += m[(p, q)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation zeroing `m[(p, q)]`.
///
/// With `beta = m[(p, q)] = |beta| e^{i phi}` the plane unitary is
/// `J_pp = c`, `J_pq = -s e^{i phi}`, `J_qp = s e^{-i phi}`, `J_qq = c`.
/// Zeroing the rotated `(p, q)` entry requires `t = s/c` to solve
/// `t^2 - 2 theta t - 1 = 0` with `theta = (m_qq - m_pp) / (2 |beta|)`;
/// the smaller-magnitude root keeps the rotation angle below pi/4, which
/// is what makes the sweep monotone. `m <- J^dag m J`, `v <- v J`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let beta = m[(p, q)];
    let b = beta.norm();
    if b < 1e-300 {
        m[(p, q)] = Complex64::new(0.0, 0.0);
        m[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let sigma = beta / b; // e^{i phi}
    let alpha = m[(p, p)].re;
    let gamma = m[(q, q)].re;

    let theta = (gamma - alpha) / (2.0 * b);
    let t = if theta == 0.0 {
        1.0
    } else {
        -theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = m.rows();
    // Rows/columns outside the plane.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        let new_kp = mkp * c + mkq * (s * sigma.conj());
        let new_kq = mkq * c - mkp * (s * sigma);
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp.conj();
        m[(k, q)] = new_kq;
        m[(q, k)] = new_kq.conj();
    }
    // The 2x2 plane itself.
    let app = alpha * c * c + 2.0 * c * s * b + gamma * s * s;
    let aqq = alpha * s * s - 2.0 * c * s * b + gamma * c * c;
    m[(p, p)] = Complex64::new(app, 0.0);
    m[(q, q)] = Complex64::new(aqq, 0.0);
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);

    // Accumulate the eigenvector transform.
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * (s * sigma.conj());
        v[(k, q)] = vkq * c - vkp * (s * sigma);
    }
}

fn sorted_spectrum(m: &CMatrix, v: CMatrix) -> Spectrum {
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&a, &b| diag[b].partial_cmp(&diag[a]).unwrap());

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}
