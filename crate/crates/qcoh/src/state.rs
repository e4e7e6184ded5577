//! Multipartite density matrices and the entropic quantities built on them.
//!
//! Subsystems are ordered big-endian: for dimensions `[d0, d1, ..]` the
//! basis label of row `m` has component `i` equal to `(m / stride_i) % d_i`
//! with `stride_i = d_{i+1} * d_{i+2} * ..`. All entropies are in bits.

use crate::cmat::{kron_all, CMatrix};
use crate::eigh::{eigh, Spectrum};
use crate::error::{Error, Result};
use crate::tol;
use num_complex::Complex64;

/// Shannon entropy in bits. Weights below `tol::ENTROPY_CUTOFF` contribute
/// zero, which is the continuous extension of `-p log2 p`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > tol::ENTROPY_CUTOFF)
        .map(|&p| -p * p.log2())
        .sum()
}

pub(crate) fn side_of(dims: &[usize]) -> usize {
    dims.iter().product()
}

pub(crate) fn strides_of(dims: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut s = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::DimensionMismatch(
            "need at least one subsystem dimension".into(),
        ));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions must be at least 2, got {d}"
        )));
    }
    Ok(())
}

/// Validates a subsystem index set: in range, no duplicates, non-empty, and
/// (optionally) a proper subset. Returns the indices sorted ascending.
pub(crate) fn check_subset(subset: &[usize], n: usize, require_proper: bool) -> Result<Vec<usize>> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    for &i in &sorted {
        if i >= n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n_subsystems: n,
            });
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadSubset("subsystem indices must be distinct".into()));
    }
    if require_proper && sorted.len() == n {
        return Err(Error::BadSubset(
            "subset must leave at least one subsystem unmeasured".into(),
        ));
    }
    Ok(sorted)
}

/// One local orthonormal basis per subsystem; the columns of each local
/// unitary are the basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductBasis {
    dims: Vec<usize>,
    locals: Vec<CMatrix>,
}

impl ProductBasis {
    /// The computational (identity) basis.
    pub fn computational(dims: &[usize]) -> Self {
        ProductBasis {
            dims: dims.to_vec(),
            locals: dims.iter().map(|&d| CMatrix::identity(d)).collect(),
        }
    }

    /// Builds a basis from explicit local unitaries, checking shape and
    /// unitarity.
    pub fn new(dims: &[usize], locals: Vec<CMatrix>) -> Result<Self> {
        check_dims(dims)?;
        if locals.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} subsystems but {} local bases",
                dims.len(),
                locals.len()
            )));
        }
        for (i, (u, &d)) in locals.iter().zip(dims).enumerate() {
            if u.rows() != d || u.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "local basis {i} is {}x{}, expected {d}x{d}",
                    u.rows(),
                    u.cols()
                )));
            }
            let residual = u.unitarity_residual();
            if residual > tol::UNITARY {
                return Err(Error::NotUnitary {
                    subsystem: i,
                    residual,
                });
            }
        }
        Ok(ProductBasis {
            dims: dims.to_vec(),
            locals,
        })
    }

    /// Constructor for locals that are unitary by construction (products of
    /// rotations of an already-validated basis); skips the residual check.
    pub(crate) fn from_trusted(dims: Vec<usize>, locals: Vec<CMatrix>) -> Self {
        debug_assert!(locals
            .iter()
            .zip(&dims)
            .all(|(u, &d)| u.rows() == d && u.unitarity_residual() < 1e-8));
        ProductBasis { dims, locals }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn locals(&self) -> &[CMatrix] {
        &self.locals
    }

    pub fn local(&self, i: usize) -> &CMatrix {
        &self.locals[i]
    }

    /// Tensor product of all local unitaries.
    pub fn full_unitary(&self) -> CMatrix {
        kron_all(&self.locals)
    }

    /// Tensor product with the locals of `subset` in place and identity on
    /// every other subsystem.
    pub fn subset_unitary(&self, subset: &[usize]) -> CMatrix {
        let factors: Vec<CMatrix> = self
            .dims
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                if subset.contains(&i) {
                    self.locals[i].clone()
                } else {
                    CMatrix::identity(d)
                }
            })
            .collect();
        kron_all(&factors)
    }

    /// Largest deviation of any local from the identity; zero means this is
    /// exactly the computational basis.
    pub fn distance_from_computational(&self) -> f64 {
        self.locals
            .iter()
            .map(|u| u.max_abs_diff(&CMatrix::identity(u.rows())))
            .fold(0.0, f64::max)
    }
}

/// A validated multipartite quantum state.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace, and positive semidefiniteness, then
    /// takes ownership. Eigenvalues in `[-1e-10, 0)` are treated as rounding
    /// noise: they are clipped to zero and the state is renormalized.
    pub fn validate(dims: &[usize], raw: CMatrix) -> Result<Self> {
        check_dims(dims)?;
        let side = side_of(dims);
        if raw.rows() != side || raw.cols() != side {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {side}x{side} for dimensions {dims:?}",
                raw.rows(),
                raw.cols()
            )));
        }
        let residual = raw.hermiticity_residual();
        if residual > tol::HERMITIAN {
            return Err(Error::NotHermitian { residual });
        }
        let trace = raw.trace().re;
        if (trace - 1.0).abs() > tol::TRACE {
            return Err(Error::BadTrace { trace });
        }

        let mat = raw.hermitian_part();
        let spec = eigh(&mat)?;
        let min_eig = spec.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -tol::EIG_CLIP {
            return Err(Error::NotPositive {
                min_eigenvalue: min_eig,
            });
        }
        if min_eig < 0.0 {
            let clipped: Vec<f64> = spec.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            let renorm = Spectrum {
                eigenvalues: clipped.iter().map(|&l| l / total).collect(),
                eigenvectors: spec.eigenvectors,
            };
            let mat = renorm.reconstruct().hermitian_part();
            return Ok(DensityMatrix {
                dims: dims.to_vec(),
                mat,
            });
        }
        Ok(DensityMatrix {
            dims: dims.to_vec(),
            mat,
        })
    }

    /// Constructor for matrices produced by this crate's own trace-preserving
    /// transforms, where re-validation would only add noise. Symmetrizes and
    /// keeps the invariants in debug builds.
    pub(crate) fn from_trusted(dims: Vec<usize>, mat: CMatrix) -> Self {
        let mat = mat.hermitian_part();
        debug_assert!((mat.trace().re - 1.0).abs() < 1e-8);
        debug_assert_eq!(mat.rows(), side_of(&dims));
        DensityMatrix { dims, mat }
    }

    /// Normalized pure state `|k><k|` from an unnormalized ket.
    pub fn pure(dims: &[usize], ket: &[Complex64]) -> Result<Self> {
        check_dims(dims)?;
        let side = side_of(dims);
        if ket.len() != side {
            return Err(Error::DimensionMismatch(format!(
                "ket has {} amplitudes, expected {side}",
                ket.len()
            )));
        }
        let norm_sqr: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::BadParameter("ket must be non-zero".into()));
        }
        let mat = CMatrix::outer(ket, ket).scale_re(1.0 / norm_sqr);
        Ok(DensityMatrix {
            dims: dims.to_vec(),
            mat,
        })
    }

    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        let side = side_of(dims);
        Ok(DensityMatrix {
            dims: dims.to_vec(),
            mat: CMatrix::identity(side).scale_re(1.0 / side as f64),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn side(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Joint state `self (x) other` with concatenated dimension lists.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix::from_trusted(dims, self.mat.kron(&other.mat))
    }

    /// Reduced state on `keep` (set semantics; original subsystem order is
    /// retained regardless of the order given).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let n = self.dims.len();
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        for &i in &keep_sorted {
            if i >= n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n_subsystems: n,
                });
            }
        }
        if keep_sorted.len() == n {
            return Ok(self.clone());
        }

        let strides = strides_of(&self.dims);
        let keep_dims: Vec<usize> = keep_sorted.iter().map(|&i| self.dims[i]).collect();
        let env: Vec<usize> = (0..n).filter(|i| !keep_sorted.contains(i)).collect();
        let env_dims: Vec<usize> = env.iter().map(|&i| self.dims[i]).collect();

        // Offset of each reduced index / environment index inside the full
        // index, so the contraction below is a flat double loop.
        let keep_offsets = index_offsets(&keep_dims, &keep_sorted, &strides);
        let env_offsets = index_offsets(&env_dims, &env, &strides);

        let out_side = side_of(&keep_dims);
        let mut out = CMatrix::zeros(out_side, out_side);
        for a in 0..out_side {
            for b in 0..out_side {
                let mut sum = Complex64::new(0.0, 0.0);
                for &e in &env_offsets {
                    sum += self.mat[(keep_offsets[a] + e, keep_offsets[b] + e)];
                }
                out[(a, b)] = sum;
            }
        }
        Ok(DensityMatrix::from_trusted(keep_dims, out))
    }

    /// Spectrum of the state (descending eigenvalues).
    pub fn spectrum(&self) -> Spectrum {
        eigh(&self.mat).expect("Jacobi eigensolver converges on validated Hermitian input")
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.spectrum().eigenvalues)
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).trace().re
    }

    /// Relative entropy `S(self || other)` in bits; `+inf` when the support
    /// of `self` is not contained in the support of `other`.
    pub fn relative_entropy(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "states have dimensions {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        let rho = self.spectrum();
        let sigma = other.spectrum();
        let n = self.side();

        // overlap[i][k] = |<rho_i | sigma_k>|^2
        let mut neg_cross = 0.0; // -Tr rho log2 sigma
        for i in 0..n {
            let li = rho.eigenvalues[i];
            if li <= tol::ENTROPY_CUTOFF {
                continue;
            }
            let vi = rho.eigenvectors.column(i);
            let mut null_weight = 0.0;
            let mut cross_i = 0.0;
            for k in 0..n {
                let sk = sigma.eigenvalues[k];
                let wk = sigma.eigenvectors.column(k);
                let olap: Complex64 = vi.iter().zip(&wk).map(|(a, b)| a.conj() * b).sum();
                let w = olap.norm_sqr();
                if sk <= tol::ENTROPY_CUTOFF {
                    null_weight += w;
                } else {
                    cross_i += w * sk.log2();
                }
            }
            if null_weight > tol::SUPPORT_OVERLAP {
                return Ok(f64::INFINITY);
            }
            neg_cross -= li * cross_i;
        }
        let entropy = shannon_entropy(&rho.eigenvalues);
        Ok(neg_cross - entropy)
    }

    /// Mutual information across the bipartition `cut | complement`, in bits.
    pub fn mutual_information(&self, cut: &[usize]) -> Result<f64> {
        let n = self.dims.len();
        let side = check_subset(cut, n, true).map_err(|e| match e {
            Error::EmptySubset => Error::BadPartition("cut must be non-empty".into()),
            Error::BadSubset(msg) => Error::BadPartition(msg),
            other => other,
        })?;
        let rest: Vec<usize> = (0..n).filter(|i| !side.contains(i)).collect();
        let sa = self.partial_trace(&side)?.entropy();
        let sb = self.partial_trace(&rest)?.entropy();
        Ok(sa + sb - self.entropy())
    }

    /// Total correlation: sum of single-subsystem entropies minus the joint
    /// entropy. For two subsystems this is the mutual information.
    pub fn total_correlation(&self) -> f64 {
        let marginal_sum: f64 = (0..self.dims.len())
            .map(|i| {
                self.partial_trace(&[i])
                    .expect("single subsystem index is valid")
                    .entropy()
            })
            .sum();
        marginal_sum - self.entropy()
    }

    /// Removes, in the given product basis, all coherences involving the
    /// `subset` subsystems: the state is rotated into the basis frame, the
    /// entries whose subset indices differ are zeroed, and the frame is
    /// rotated back. With `subset` covering every subsystem this is full
    /// dephasing (the diagonal part in the product basis).
    pub fn dephase(&self, basis: &ProductBasis, subset: &[usize]) -> Result<DensityMatrix> {
        if basis.dims() != self.dims.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "basis dimensions {:?} do not match state dimensions {:?}",
                basis.dims(),
                self.dims
            )));
        }
        let subset = match check_subset(subset, self.dims.len(), false) {
            Ok(s) => s,
            Err(Error::BadSubset(msg)) => return Err(Error::BadSubset(msg)),
            Err(e) => return Err(e),
        };

        let w = basis.subset_unitary(&subset);
        let rotated = self.mat.conjugate_by(&w);
        let codes = subset_codes(&self.dims, &subset);
        let side = self.side();
        let mut pinched = CMatrix::zeros(side, side);
        for r in 0..side {
            for c in 0..side {
                if codes[r] == codes[c] {
                    pinched[(r, c)] = rotated[(r, c)];
                }
            }
        }
        let back = pinched.conjugate_by(&w.adjoint());
        Ok(DensityMatrix::from_trusted(self.dims.clone(), back))
    }
}

/// For every index of the reduced space spanned by `dims` (placed at global
/// subsystem positions `positions`), the contribution to the full flat index.
fn index_offsets(dims: &[usize], positions: &[usize], full_strides: &[usize]) -> Vec<usize> {
    let side = side_of(dims);
    let local_strides = strides_of(dims);
    (0..side)
        .map(|m| {
            dims.iter()
                .enumerate()
                .map(|(i, &d)| ((m / local_strides[i]) % d) * full_strides[positions[i]])
                .sum()
        })
        .collect()
}

/// `codes[m]` collapses the full index `m` to its components on `subset`;
/// two indices share a code exactly when they agree on every subset
/// subsystem.
pub(crate) fn subset_codes(dims: &[usize], subset: &[usize]) -> Vec<usize> {
    let strides = strides_of(dims);
    let side = side_of(dims);
    let mut code_stride = vec![0usize; subset.len()];
    let mut acc = 1usize;
    for (j, &i) in subset.iter().enumerate().rev() {
        code_stride[j] = acc;
        acc *= dims[i];
    }
    (0..side)
        .map(|m| {
            subset
                .iter()
                .enumerate()
                .map(|(j, &i)| ((m / strides[i]) % dims[i]) * code_stride[j])
                .sum()
        })
        .collect()
}
