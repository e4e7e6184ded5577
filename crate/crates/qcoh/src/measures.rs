//! Entropic coherence and discord measures.
//!
//! All quantities are entropy differences in bits, built from two motifs:
//!
//! * **Coherence relative to a basis**: `C^K(rho) = S(delta_K(rho)) - S(rho)`
//!   where `delta_K` dephases in the product basis `K`. This is closed-form.
//! * **Optimized variants**: minimize (or maximize) such a difference over
//!   product bases of some subset of subsystems, using
//!   [`basis::minimize_over_bases`](crate::basis::minimize_over_bases).
//!
//! The basis search evaluates cheap equivalent objectives — dephased-state
//! entropies reduce to Shannon entropies of pinched probabilities or of
//! block spectra, with no full eigendecomposition — but every reported value
//! is recomputed at the winning basis through the official `dephase` +
//! `entropy` path, so a returned witness always reproduces its value.
//!
//! Searched minima are upper bounds on the true minima, never lower: the
//! reference (computational) basis is always among the starts, so identities
//! like `discord <= coherence` hold for the *computed* values by
//! construction, not just in exact arithmetic.

use crate::basis::{minimize_over_bases, BasisSearchResult, SearchConfig};
use crate::cmat::CMatrix;
use crate::eigh::eigh;
use crate::error::{Error, Result};
use crate::state::{check_subset, shannon_entropy, subset_codes, DensityMatrix, ProductBasis};

/// A computed measure: the value, and for optimized measures the basis that
/// attains it together with search diagnostics.
#[derive(Clone, Debug)]
pub struct MeasureValue {
    pub value: f64,
    /// Basis attaining the reported value; `None` for closed-form measures.
    pub witness: Option<ProductBasis>,
    /// Multi-start search diagnostics; `None` for closed-form measures.
    pub search: Option<BasisSearchResult>,
}

impl MeasureValue {
    fn closed(value: f64) -> Self {
        MeasureValue {
            value,
            witness: None,
            search: None,
        }
    }
}

fn all_subsystems(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Product basis whose locals on `subset` are the eigenbases of the
/// single-subsystem reduced states; a strong warm start for every search
/// here (it is the exact optimum for product states).
fn marginal_eigenbasis(rho: &DensityMatrix, subset: &[usize]) -> ProductBasis {
    let locals: Vec<CMatrix> = rho
        .dims()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if subset.contains(&i) {
                let reduced = rho
                    .partial_trace(&[i])
                    .expect("single subsystem index is valid");
                eigh(reduced.matrix())
                    .expect("Jacobi converges on a reduced density matrix")
                    .eigenvectors
            } else {
                CMatrix::identity(d)
            }
        })
        .collect();
    ProductBasis::from_trusted(rho.dims().to_vec(), locals)
}

/// Diagonal of `W^dag rho W` for the full product unitary `W`; these are the
/// outcome probabilities of a complete product-basis measurement, and their
/// Shannon entropy is the entropy of the fully dephased state.
fn pinched_probs(mat: &CMatrix, basis: &ProductBasis) -> Vec<f64> {
    let w = basis.full_unitary();
    let side = w.rows();
    (0..side)
        .map(|m| {
            let col = w.column(m);
            let y = mat.matvec(&col);
            col.iter()
                .zip(&y)
                .map(|(c, yy)| (c.conj() * yy).re)
                .sum()
        })
        .collect()
}

/// Block structure of a state dephased on a subset of subsystems: in the
/// rotated frame the state is block diagonal, one block per measurement
/// outcome on the subset. Eigenvalues of the blocks give the dephased
/// state's spectrum; block traces give the outcome probabilities.
struct BlockPinch {
    subset: Vec<usize>,
    groups: Vec<Vec<usize>>,
}

impl BlockPinch {
    fn new(dims: &[usize], subset: &[usize]) -> Self {
        let codes = subset_codes(dims, subset);
        let n_codes: usize = subset.iter().map(|&i| dims[i]).product();
        let mut groups = vec![Vec::new(); n_codes];
        for (idx, &c) in codes.iter().enumerate() {
            groups[c].push(idx);
        }
        BlockPinch {
            subset: subset.to_vec(),
            groups,
        }
    }

    /// (spectrum of the dephased state, outcome probabilities).
    fn eigs_and_probs(&self, mat: &CMatrix, basis: &ProductBasis) -> (Vec<f64>, Vec<f64>) {
        let w = basis.subset_unitary(&self.subset);
        let rot = mat.conjugate_by(&w);
        let mut eigs = Vec::with_capacity(mat.rows());
        let mut probs = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let block = CMatrix::from_fn(g.len(), g.len(), |a, b| rot[(g[a], g[b])]);
            probs.push(block.trace().re);
            let spec = eigh(&block).expect("Jacobi converges on a Hermitian block");
            eigs.extend(spec.eigenvalues);
        }
        (eigs, probs)
    }
}

/// Relative-entropy coherence with respect to a product basis:
/// `S(delta_K(rho)) - S(rho)`. Closed form; no search.
pub fn coherence(rho: &DensityMatrix, reference: &ProductBasis) -> Result<MeasureValue> {
    let subset = all_subsystems(rho.n_subsystems());
    let dephased = rho.dephase(reference, &subset)?;
    Ok(MeasureValue::closed(dephased.entropy() - rho.entropy()))
}

/// Quantum discord as the minimal entropy production of a complete
/// product-basis dephasing: `min_B S(delta_B(rho)) - S(rho)`. The witness is
/// the minimizing basis.
pub fn discord(rho: &DensityMatrix, config: &SearchConfig) -> Result<MeasureValue> {
    discord_with_warm_starts(rho, config, &[])
}

fn discord_with_warm_starts(
    rho: &DensityMatrix,
    config: &SearchConfig,
    extra_starts: &[ProductBasis],
) -> Result<MeasureValue> {
    let subset = all_subsystems(rho.n_subsystems());
    let mut warm = vec![marginal_eigenbasis(rho, &subset)];
    warm.extend_from_slice(extra_starts);
    let mat = rho.matrix().clone();
    let objective = move |b: &ProductBasis| shannon_entropy(&pinched_probs(&mat, b));
    let search = minimize_over_bases(objective, rho.dims(), &subset, config, &warm)?;

    let chi = rho.dephase(&search.best_basis, &subset)?;
    Ok(MeasureValue {
        value: chi.entropy() - rho.entropy(),
        witness: Some(search.best_basis.clone()),
        search: Some(search),
    })
}

/// The split of basis coherence into discord and dissonance, all evaluated
/// at one discord witness so the exchange identity
/// `coherence + entropic_cost = discord + dissonance` holds exactly.
#[derive(Clone, Debug)]
pub struct CoherenceDecomposition {
    /// `C = S(delta_K(rho)) - S(rho)`.
    pub coherence: f64,
    /// `Q = S(chi) - S(rho)` with `chi` the dephasing of `rho` in the
    /// witness basis.
    pub discord: f64,
    /// `D = S(delta_K(chi)) - S(chi)`: coherence left in the closest
    /// classical state.
    pub dissonance: f64,
    /// `L = S(delta_K(chi)) - S(delta_K(rho))`: the entropy the reference
    /// dephasing gains by passing through `chi` first. Signed; negative
    /// values mean the basis coherence exceeds `discord + dissonance`.
    pub entropic_cost: f64,
    pub witness: ProductBasis,
    pub search: BasisSearchResult,
}

/// Computes coherence, discord, dissonance, and entropic cost of `rho` with
/// respect to `reference` in one search. The reference basis joins the warm
/// starts, so `discord <= coherence` holds for the computed values.
pub fn ck_decomposition(
    rho: &DensityMatrix,
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<CoherenceDecomposition> {
    if reference.dims() != rho.dims() {
        return Err(Error::DimensionMismatch(format!(
            "reference basis dimensions {:?} do not match state dimensions {:?}",
            reference.dims(),
            rho.dims()
        )));
    }
    let subset = all_subsystems(rho.n_subsystems());
    let extra: Vec<ProductBasis> = if reference.distance_from_computational() > 0.0 {
        vec![reference.clone()]
    } else {
        Vec::new()
    };
    let q = discord_with_warm_starts(rho, config, &extra)?;
    let witness = q.witness.clone().expect("discord always carries a witness");
    let search = q.search.expect("discord always carries diagnostics");

    let s_rho = rho.entropy();
    let chi = rho.dephase(&witness, &subset)?;
    let s_chi = chi.entropy();
    let s_dephased_rho = rho.dephase(reference, &subset)?.entropy();
    let s_dephased_chi = chi.dephase(reference, &subset)?.entropy();

    Ok(CoherenceDecomposition {
        coherence: s_dephased_rho - s_rho,
        discord: s_chi - s_rho,
        dissonance: s_dephased_chi - s_chi,
        entropic_cost: s_dephased_chi - s_dephased_rho,
        witness,
        search,
    })
}

/// Quantum dissonance relative to a basis: the coherence remaining in the
/// closest classical (dephased) state.
pub fn dissonance(
    rho: &DensityMatrix,
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<MeasureValue> {
    let dec = ck_decomposition(rho, reference, config)?;
    Ok(MeasureValue {
        value: dec.dissonance,
        witness: Some(dec.witness),
        search: Some(dec.search),
    })
}

/// Entropic cost `L` of the coherence split (signed; see
/// [`CoherenceDecomposition::entropic_cost`]).
pub fn entropic_cost(
    rho: &DensityMatrix,
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<MeasureValue> {
    let dec = ck_decomposition(rho, reference, config)?;
    Ok(MeasureValue {
        value: dec.entropic_cost,
        witness: Some(dec.witness),
        search: Some(dec.search),
    })
}

/// Quantum-incoherent coherence: entropy produced by dephasing only the
/// `measured` subsystems in the reference basis,
/// `S(delta_K^measured(rho)) - S(rho)`. Closed form.
pub fn qi_coherence(
    rho: &DensityMatrix,
    measured: &[usize],
    reference: &ProductBasis,
) -> Result<MeasureValue> {
    let measured = check_subset(measured, rho.n_subsystems(), true)?;
    let dephased = rho.dephase(reference, &measured)?;
    Ok(MeasureValue::closed(dephased.entropy() - rho.entropy()))
}

/// One-way discord: minimal entropy produced by dephasing the `measured`
/// subsystems over all product bases on them.
pub fn one_way_discord(
    rho: &DensityMatrix,
    measured: &[usize],
    config: &SearchConfig,
) -> Result<MeasureValue> {
    let measured = check_subset(measured, rho.n_subsystems(), true)?;
    let warm = vec![marginal_eigenbasis(rho, &measured)];
    let pinch = BlockPinch::new(rho.dims(), &measured);
    let mat = rho.matrix().clone();
    let objective = move |b: &ProductBasis| {
        let (eigs, _) = pinch.eigs_and_probs(&mat, b);
        shannon_entropy(&eigs)
    };
    let search = minimize_over_bases(objective, rho.dims(), &measured, config, &warm)?;

    let omega = rho.dephase(&search.best_basis, &measured)?;
    Ok(MeasureValue {
        value: omega.entropy() - rho.entropy(),
        witness: Some(search.best_basis.clone()),
        search: Some(search),
    })
}

/// One-way dissonance: reference-basis coherence of the one-way-discord
/// witness state `omega = delta_B^measured(rho)`, measured on the same
/// subsystems.
pub fn one_way_dissonance(
    rho: &DensityMatrix,
    measured: &[usize],
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<MeasureValue> {
    let measured_sorted = check_subset(measured, rho.n_subsystems(), true)?;
    if reference.dims() != rho.dims() {
        return Err(Error::DimensionMismatch(format!(
            "reference basis dimensions {:?} do not match state dimensions {:?}",
            reference.dims(),
            rho.dims()
        )));
    }
    let disc = one_way_discord(rho, &measured_sorted, config)?;
    let witness = disc
        .witness
        .clone()
        .expect("one-way discord always carries a witness");
    let omega = rho.dephase(&witness, &measured_sorted)?;
    let value = omega.dephase(reference, &measured_sorted)?.entropy() - omega.entropy();
    Ok(MeasureValue {
        value,
        witness: Some(witness),
        search: disc.search,
    })
}

/// Measurement-induced information loss: mutual information across
/// `measured | rest` minus the largest mutual information any complete
/// product measurement on `measured` can leave behind,
/// `I(rho) - max_B I(delta_B^measured(rho))`.
pub fn zurek_discord(
    rho: &DensityMatrix,
    measured: &[usize],
    config: &SearchConfig,
) -> Result<MeasureValue> {
    let measured = check_subset(measured, rho.n_subsystems(), true)?;
    let i_rho = rho.mutual_information(&measured)?;

    // For the dephased state, I = H(outcome probs) + S(rest marginal)
    // - H(block spectrum); the rest marginal is untouched by the dephasing,
    // so maximizing I means minimizing H(blocks) - H(probs).
    let warm = vec![marginal_eigenbasis(rho, &measured)];
    let pinch = BlockPinch::new(rho.dims(), &measured);
    let mat = rho.matrix().clone();
    let objective = move |b: &ProductBasis| {
        let (eigs, probs) = pinch.eigs_and_probs(&mat, b);
        shannon_entropy(&eigs) - shannon_entropy(&probs)
    };
    let search = minimize_over_bases(objective, rho.dims(), &measured, config, &warm)?;

    let omega = rho.dephase(&search.best_basis, &measured)?;
    let i_after = omega.mutual_information(&measured)?;
    Ok(MeasureValue {
        value: i_rho - i_after,
        witness: Some(search.best_basis.clone()),
        search: Some(search),
    })
}

/// Symmetric information loss: total correlation minus the largest total
/// correlation surviving a complete product measurement on every subsystem,
/// `T(rho) - max_B T(delta_B(rho))`. For two subsystems the total
/// correlation is the mutual information, so this is the two-sided analogue
/// of [`zurek_discord`].
pub fn symmetric_discord(rho: &DensityMatrix, config: &SearchConfig) -> Result<MeasureValue> {
    let dims = rho.dims().to_vec();
    let n = dims.len();
    let subset = all_subsystems(n);
    let t_rho = rho.total_correlation();

    // The dephased state is classical, so its total correlation is a pure
    // probability computation: sum of marginal entropies of the pinched
    // distribution minus its joint entropy. Maximize by minimizing the
    // negation.
    let component_maps: Vec<Vec<usize>> = (0..n).map(|i| subset_codes(&dims, &[i])).collect();
    let warm = vec![marginal_eigenbasis(rho, &subset)];
    let mat = rho.matrix().clone();
    let objective = move |b: &ProductBasis| {
        let p = pinched_probs(&mat, b);
        let mut marginal_sum = 0.0;
        for (i, map) in component_maps.iter().enumerate() {
            let mut pm = vec![0.0; dims[i]];
            for (idx, &c) in map.iter().enumerate() {
                pm[c] += p[idx];
            }
            marginal_sum += shannon_entropy(&pm);
        }
        shannon_entropy(&p) - marginal_sum
    };
    let search = minimize_over_bases(objective, rho.dims(), &subset, config, &warm)?;

    let omega = rho.dephase(&search.best_basis, &subset)?;
    Ok(MeasureValue {
        value: t_rho - omega.total_correlation(),
        witness: Some(search.best_basis.clone()),
        search: Some(search),
    })
}

/// Information-loss discord down the chain of reduced states: entry `i` is
/// `zurek_discord` of the reduction to subsystems `i..N`, measured on its
/// first subsystem. The sum of these terms is the chain's total
/// measurement-induced loss.
pub fn chain_discord_sum(
    rho: &DensityMatrix,
    config: &SearchConfig,
) -> Result<Vec<MeasureValue>> {
    let n = rho.n_subsystems();
    if n < 2 {
        return Err(Error::BadPartition(
            "chain decomposition needs at least two subsystems".into(),
        ));
    }
    let mut out = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let keep: Vec<usize> = (i..n).collect();
        let reduced = rho.partial_trace(&keep)?;
        out.push(zurek_discord(&reduced, &[0], config)?);
    }
    Ok(out)
}
