//! Named reference states and seeded random-state ensembles.
//!
//! Random states are indexable rather than only streamable: state `i` of an
//! ensemble is drawn from an RNG seeded by `(spec.seed, stream = i + 1)`, so
//! any single state can be regenerated from its `(seed, index)` pair without
//! replaying the ensemble. That is what verification reports record for
//! failures.

use crate::basis::haar_local;
use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::state::{side_of, DensityMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Closed-form states used as references and edge cases throughout the test
/// and verification layers.
#[derive(Clone, Debug, PartialEq)]
pub enum NamedState {
    /// `|+>|+>`: product state, maximal basis coherence, no correlations.
    PlusPlus,
    /// `(|00> + |11>)/sqrt(2)`.
    Bell,
    /// Equal mixture of `|+>|0>`, `|->|1>`, `|0>|->`, `|1>|+>`: separable
    /// with maximally mixed marginals.
    Datta,
    /// `(1-p) I/4 + p |Bell><Bell|` with `p` in `[0, 1]`.
    Werner(f64),
    /// `(|0..0> + |1..1>)/sqrt(2)` on `n` qubits.
    Ghz(usize),
    /// Equal superposition of the single-excitation states on `n` qubits.
    W(usize),
    /// `I/d` over the given subsystem dimensions.
    MaximallyMixed(Vec<usize>),
}

/// Largest qubit count accepted for the `ghz(n)` / `w(n)` families; keeps
/// the dense kernels in their intended size range.
const MAX_QUBITS: usize = 6;

fn qubit_ket(n: usize, assign: impl Fn(usize) -> Complex64) -> Vec<Complex64> {
    (0..1usize << n).map(assign).collect()
}

/// Builds a named state.
pub fn named_state(which: &NamedState) -> Result<DensityMatrix> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    match which {
        NamedState::PlusPlus => DensityMatrix::pure(&[2, 2], &[c(0.5); 4]),
        NamedState::Bell => {
            DensityMatrix::pure(&[2, 2], &[c(a), c(0.0), c(0.0), c(a)])
        }
        NamedState::Datta => {
            let kets: [[Complex64; 4]; 4] = [
                [c(a), c(0.0), c(a), c(0.0)],   // |+>|0>
                [c(0.0), c(a), c(0.0), c(-a)],  // |->|1>
                [c(a), c(-a), c(0.0), c(0.0)],  // |0>|->
                [c(0.0), c(0.0), c(a), c(a)],   // |1>|+>
            ];
            let mut m = CMatrix::zeros(4, 4);
            for k in &kets {
                m = &m + &CMatrix::outer(k, k).scale_re(0.25);
            }
            DensityMatrix::validate(&[2, 2], m)
        }
        NamedState::Werner(p) => {
            if !(0.0..=1.0).contains(p) || !p.is_finite() {
                return Err(Error::BadParameter(format!(
                    "werner mixing parameter must be in [0, 1], got {p}"
                )));
            }
            let psi = [c(a), c(0.0), c(0.0), c(a)];
            let m = &CMatrix::identity(4).scale_re((1.0 - p) / 4.0)
                + &CMatrix::outer(&psi, &psi).scale_re(*p);
            DensityMatrix::validate(&[2, 2], m)
        }
        NamedState::Ghz(n) => {
            check_qubit_count(*n, "ghz")?;
            let last = (1usize << n) - 1;
            let ket = qubit_ket(*n, |i| if i == 0 || i == last { c(a) } else { c(0.0) });
            DensityMatrix::pure(&vec![2; *n], &ket)
        }
        NamedState::W(n) => {
            check_qubit_count(*n, "w")?;
            let amp = 1.0 / (*n as f64).sqrt();
            let ket = qubit_ket(*n, |i| {
                if i.is_power_of_two() {
                    c(amp)
                } else {
                    c(0.0)
                }
            });
            DensityMatrix::pure(&vec![2; *n], &ket)
        }
        NamedState::MaximallyMixed(dims) => DensityMatrix::maximally_mixed(dims),
    }
}

fn check_qubit_count(n: usize, family: &str) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::BadParameter(format!(
            "{family}(n) supports n in 2..={MAX_QUBITS}, got {n}"
        )));
    }
    Ok(())
}

/// Resolves a state name plus optional parameters (as they arrive from the
/// command line) into a [`NamedState`].
pub fn parse_named(name: &str, p: Option<f64>, dims: Option<&[usize]>) -> Result<NamedState> {
    let qubit_count = |family: &str| -> Result<usize> {
        match dims {
            None => Ok(3),
            Some(ds) if ds.iter().all(|&d| d == 2) => Ok(ds.len()),
            Some(ds) => Err(Error::BadParameter(format!(
                "{family}(n) is a qubit family; --dims must be all 2s, got {ds:?}"
            ))),
        }
    };
    match name {
        "plus_plus" => Ok(NamedState::PlusPlus),
        "bell" => Ok(NamedState::Bell),
        "datta" => Ok(NamedState::Datta),
        "werner" => match p {
            Some(p) => Ok(NamedState::Werner(p)),
            None => Err(Error::BadParameter(
                "werner requires a mixing parameter (--p)".into(),
            )),
        },
        "ghz" => Ok(NamedState::Ghz(qubit_count("ghz")?)),
        "w" => Ok(NamedState::W(qubit_count("w")?)),
        "maximally_mixed" => Ok(NamedState::MaximallyMixed(
            dims.map(|d| d.to_vec()).unwrap_or_else(|| vec![2, 2]),
        )),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Families of random states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// Haar-random pure states of the full system.
    HaarPure,
    /// Mixed states induced by tracing an environment of equal size out of
    /// a Haar-random pure state.
    InducedMixed,
    /// Tensor products of independent Haar-random pure states, one per
    /// subsystem.
    ProductPure,
    /// Random probability weights on a Haar-random product basis:
    /// classically correlated states with no discord in that frame.
    Classical,
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar" | "haar_pure" => Ok(EnsembleKind::HaarPure),
            "induced" | "induced_mixed" => Ok(EnsembleKind::InducedMixed),
            "product" | "product_pure" => Ok(EnsembleKind::ProductPure),
            "classical" => Ok(EnsembleKind::Classical),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

/// A fully reproducible random-state ensemble.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dims: Vec<usize>,
    pub count: usize,
    pub seed: u64,
}

fn standard_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn haar_ket(side: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let ket: Vec<Complex64> = (0..side).map(|_| standard_complex(rng)).collect();
        if ket.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-12 {
            return ket;
        }
    }
}

/// Draws state `index` of the ensemble. Independent of how many other states
/// are drawn: each index has its own RNG stream.
pub fn random_state(spec: &EnsembleSpec, index: usize) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64 + 1);
    let dims = &spec.dims;
    let side = side_of(dims);

    match spec.kind {
        EnsembleKind::HaarPure => DensityMatrix::pure(dims, &haar_ket(side, &mut rng)),
        EnsembleKind::InducedMixed => {
            // Pure state on system (x) environment of the same size, then
            // trace the environment: rho_rs = sum_e v[r,e] conj(v[s,e]).
            let v = haar_ket(side * side, &mut rng);
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let m = CMatrix::from_fn(side, side, |r, s| {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..side {
                    acc += v[r * side + e] * v[s * side + e].conj();
                }
                acc / norm
            });
            DensityMatrix::validate(dims, m)
        }
        EnsembleKind::ProductPure => {
            let mut state: Option<DensityMatrix> = None;
            for &d in dims {
                let factor = DensityMatrix::pure(&[d], &haar_ket(d, &mut rng))?;
                state = Some(match state {
                    None => factor,
                    Some(s) => s.tensor(&factor),
                });
            }
            Ok(state.expect("dimension list is non-empty"))
        }
        EnsembleKind::Classical => {
            // Flat-Dirichlet weights via normalized exponentials.
            let mut probs: Vec<f64> = (0..side)
                .map(|_| -(1.0 - rng.gen::<f64>()).ln())
                .collect();
            let total: f64 = probs.iter().sum();
            for p in probs.iter_mut() {
                *p /= total;
            }
            let locals: Vec<CMatrix> = dims.iter().map(|&d| haar_local(d, &mut rng)).collect();
            let w = crate::cmat::kron_all(&locals);
            let m = CMatrix::from_fn(side, side, |i, j| {
                (0..side)
                    .map(|k| w[(i, k)] * probs[k] * w[(j, k)].conj())
                    .sum()
            });
            DensityMatrix::validate(dims, m)
        }
    }
}

/// Streams the whole ensemble in index order.
pub fn random_states<'a>(
    spec: &'a EnsembleSpec,
) -> impl Iterator<Item = Result<DensityMatrix>> + 'a {
    (0..spec.count).map(move |i| random_state(spec, i))
}
