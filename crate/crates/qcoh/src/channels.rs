//! Kraus channels, incoherence certification, and the tripartite
//! coherence-distribution scenario.
//!
//! A channel is incoherent (with respect to the computational basis) when
//! every Kraus operator maps basis vectors to scaled basis vectors, i.e.
//! each column holds at most one non-zero entry. Such channels can shuffle,
//! dampen, or dephase populations but never create superpositions, which is
//! what makes them the free operations of the coherence measures in this
//! crate.

use crate::cmat::{kron_all, CMatrix};
use crate::error::{Error, Result};
use crate::state::{DensityMatrix, ProductBasis};
use crate::tol;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A completely positive trace-preserving map in Kraus form. Operators may
/// be rectangular (`output_dim x input_dim`); completeness
/// `sum K^dag K = I_input` is enforced at construction.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    input_dim: usize,
    output_dim: usize,
    operators: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let first = operators.first().ok_or_else(|| {
            Error::DimensionMismatch("a channel needs at least one Kraus operator".into())
        })?;
        let (out_d, in_d) = (first.rows(), first.cols());
        if in_d < 2 || out_d < 2 {
            return Err(Error::DimensionMismatch(
                "Kraus operators must act on dimension >= 2".into(),
            ));
        }
        for k in &operators {
            if k.rows() != out_d || k.cols() != in_d {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operators disagree in shape: {}x{} vs {}x{}",
                    k.rows(),
                    k.cols(),
                    out_d,
                    in_d
                )));
            }
        }
        let mut gram = CMatrix::zeros(in_d, in_d);
        for k in &operators {
            gram = &gram + &k.adjoint().matmul(k);
        }
        let residual = gram.max_abs_diff(&CMatrix::identity(in_d));
        if residual > tol::KRAUS {
            return Err(Error::KrausIncomplete { residual });
        }
        Ok(KrausChannel {
            input_dim: in_d,
            output_dim: out_d,
            operators,
        })
    }

    /// Like [`KrausChannel::new`] but additionally requires the incoherence
    /// certificate to hold.
    pub fn new_incoherent(operators: Vec<CMatrix>) -> Result<Self> {
        let ch = KrausChannel::new(operators)?;
        ch.certify_incoherent()?;
        Ok(ch)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// Verifies that no Kraus operator can create coherence: every column
    /// must have at most one entry above the unitarity tolerance.
    pub fn certify_incoherent(&self) -> Result<()> {
        for (op_idx, k) in self.operators.iter().enumerate() {
            for col in 0..k.cols() {
                let nonzero = (0..k.rows())
                    .filter(|&row| k[(row, col)].norm() > tol::UNITARY)
                    .count();
                if nonzero > 1 {
                    return Err(Error::NotIncoherent {
                        operator: op_idx,
                        column: col,
                    });
                }
            }
        }
        Ok(())
    }

    /// Largest deviation of `sum K^dag K` from the identity.
    pub fn completeness_residual(&self) -> f64 {
        let mut gram = CMatrix::zeros(self.input_dim, self.input_dim);
        for k in &self.operators {
            gram = &gram + &k.adjoint().matmul(k);
        }
        gram.max_abs_diff(&CMatrix::identity(self.input_dim))
    }
}

/// Applies `channel` to subsystem `target` of `rho`, leaving the others
/// untouched. The output is re-validated, so it satisfies every state
/// invariant.
pub fn apply_channel(
    channel: &KrausChannel,
    rho: &DensityMatrix,
    target: usize,
) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if target >= dims.len() {
        return Err(Error::IndexOutOfRange {
            index: target,
            n_subsystems: dims.len(),
        });
    }
    if channel.input_dim != dims[target] {
        return Err(Error::DimensionMismatch(format!(
            "channel acts on dimension {}, subsystem {target} has dimension {}",
            channel.input_dim, dims[target]
        )));
    }
    let pre: usize = dims[..target].iter().product();
    let post: usize = dims[target + 1..].iter().product();
    let mut out_dims = dims.to_vec();
    out_dims[target] = channel.output_dim;

    let out_side: usize = out_dims.iter().product();
    let mut out = CMatrix::zeros(out_side, out_side);
    for k in &channel.operators {
        let embedded = kron_all(&[
            CMatrix::identity(pre),
            k.clone(),
            CMatrix::identity(post),
        ]);
        let term = embedded.matmul(rho.matrix()).matmul(&embedded.adjoint());
        out = &out + &term;
    }
    DensityMatrix::validate(&out_dims, out)
}

/// A random incoherent channel: a convex mixture of a random diagonal phase
/// unitary, a random permutation, and a complete projective measurement.
/// All three families are incoherent, so the mixture is too; the weights
/// and choices are fully determined by the seed.
pub fn random_incoherent_channel(dim: usize, seed: u64) -> KrausChannel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Dirichlet(1,1,1) weights via normalized exponentials.
    let mut w = [0.0f64; 3];
    for wi in w.iter_mut() {
        *wi = -(1.0 - rng.gen::<f64>()).ln();
    }
    let total: f64 = w.iter().sum();
    for wi in w.iter_mut() {
        *wi /= total;
    }

    let mut operators = Vec::with_capacity(2 + dim);

    // Phase unitary.
    let phase_amp = w[0].sqrt();
    let phases: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::from_polar(phase_amp, rng.gen::<f64>() * std::f64::consts::TAU))
        .collect();
    operators.push(CMatrix::diag(&phases));

    // Permutation.
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(&mut rng);
    let perm_amp = w[1].sqrt();
    let mut p = CMatrix::zeros(dim, dim);
    for (col, &row) in perm.iter().enumerate() {
        p[(row, col)] = Complex64::new(perm_amp, 0.0);
    }
    operators.push(p);

    // Projective measurement: one rank-one piece per basis vector.
    let proj_amp = w[2].sqrt();
    for k in 0..dim {
        let mut pk = CMatrix::zeros(dim, dim);
        pk[(k, k)] = Complex64::new(proj_amp, 0.0);
        operators.push(pk);
    }

    KrausChannel::new_incoherent(operators)
        .expect("mixture of incoherent unitaries and projectors is a valid incoherent channel")
}

/// The tripartite setting for coherence-distribution checks: subsystems are
/// ordered (A, B, R), an optional incoherent channel acts on R, and all
/// coherences refer to one product basis.
#[derive(Clone, Debug)]
pub struct DistributionScenario {
    /// Initial state on (A, B, R).
    pub initial: DensityMatrix,
    /// Channel applied to R (subsystem index 2); `None` leaves the state
    /// unchanged.
    pub channel: Option<KrausChannel>,
    /// Reference product basis for every coherence term.
    pub reference: ProductBasis,
}

impl DistributionScenario {
    /// Index of the R subsystem within the scenario ordering.
    pub const R: usize = 2;
}
