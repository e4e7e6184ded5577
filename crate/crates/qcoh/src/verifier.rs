//! Executable checks for the inequalities and identities the measures
//! satisfy, with machine-readable reports.
//!
//! Every check produces a [`TheoremReport`]: the numeric terms that went
//! into the inequality, one [`BoundCheck`] per inequality (slack =
//! rhs − lhs, pass ⇔ slack ≥ −[`tol::SLACK`]), and any exact identities
//! verified along the way. Checks that depend on a basis search retry once
//! with four times the random starts before recording a failure, because a
//! suboptimal inner optimum can only make a left-hand side look too large.
//!
//! The registry used by [`verify_ensemble`] names the checks:
//!
//! | id       | inequality family                                            |
//! |----------|--------------------------------------------------------------|
//! | `1`      | discord ≤ coherence ≤ discord + dissonance, cost identity    |
//! | `2`      | one-way information loss + local coherences ≤ joint coherence|
//! | `3`      | symmetric information loss variant of `2`, plus ordering     |
//! | `4`      | multipartite chain and symmetric trade-offs                  |
//! | `5`      | tripartite coherence distribution (no channel)               |
//! | `6`      | coherence distribution across an incoherent channel          |
//! | `oneway` | one-way discord ≤ conditional coherence ≤ discord+dissonance |
//! | `bounds` | conditional-coherence upper and lower closed-form bounds     |

use crate::basis::SearchConfig;
use crate::channels::{apply_channel, random_incoherent_channel, DistributionScenario};
use crate::ensembles::{named_state, random_state, EnsembleSpec, NamedState};
use crate::error::{Error, Result};
use crate::measures::{
    chain_discord_sum, ck_decomposition, coherence, one_way_discord, one_way_dissonance,
    qi_coherence, symmetric_discord, zurek_discord,
};
use crate::par::ordered_collect;
use crate::state::{DensityMatrix, ProductBasis};
use crate::tol;
use serde::Serialize;
use std::collections::BTreeMap;

/// Offset mixed into the ensemble seed so that theorem-6 channel draws are
/// decorrelated from the state draws that share the same (seed, index).
const CHANNEL_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// One inequality `lhs ≤ rhs`, recorded with its slack.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; negative means the bound is violated.
    pub slack: f64,
    pub pass: bool,
}

impl BoundCheck {
    pub fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        BoundCheck {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            pass: slack >= -tol::SLACK,
        }
    }
}

/// An equality that must hold to within `tolerance`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub delta: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(name: &str, delta: f64, tolerance: f64) -> Self {
        IdentityCheck {
            name: name.to_string(),
            delta,
            tolerance,
            pass: delta.abs() <= tolerance,
        }
    }
}

/// Outcome of one theorem check on one state.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub theorem_id: String,
    /// Human-readable state descriptor (a name, or `seed=..,index=..`).
    pub state: String,
    /// Every numeric term entering the inequalities.
    pub terms: BTreeMap<String, f64>,
    pub bounds: Vec<BoundCheck>,
    pub identities: Vec<IdentityCheck>,
    /// lhs/rhs/slack of the binding (smallest-slack) bound.
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub retries_used: usize,
    /// Optimizer diagnostics: starts, iterations, and convergence flags.
    pub diagnostics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    fn assemble(
        theorem_id: &str,
        state: &str,
        terms: BTreeMap<String, f64>,
        bounds: Vec<BoundCheck>,
        identities: Vec<IdentityCheck>,
        diagnostics: BTreeMap<String, f64>,
        notes: Vec<String>,
    ) -> Self {
        let binding = bounds
            .iter()
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
            .expect("every theorem check records at least one bound");
        let (lhs, rhs, slack) = (binding.lhs, binding.rhs, binding.slack);
        let pass = bounds.iter().all(|b| b.pass) && identities.iter().all(|i| i.pass);
        TheoremReport {
            theorem_id: theorem_id.to_string(),
            state: state.to_string(),
            terms,
            bounds,
            identities,
            lhs,
            rhs,
            slack,
            pass,
            retries_used: 0,
            diagnostics,
            notes,
        }
    }

    /// The bound with the given name, if recorded.
    pub fn bound(&self, name: &str) -> Option<&BoundCheck> {
        self.bounds.iter().find(|b| b.name == name)
    }
}

/// Replay coordinates for a failing ensemble trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ReplayKey {
    pub seed: u64,
    pub index: usize,
}

/// Histogram of binding slacks over an ensemble run.
#[derive(Clone, Debug, Serialize)]
pub struct SlackHistogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl SlackHistogram {
    fn from_slacks(slacks: &[f64], bins: usize) -> Self {
        let lo = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = slacks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if slacks.is_empty() { (0.0, 0.0) } else { (lo, hi) };
        let width = (hi - lo).max(f64::MIN_POSITIVE);
        let mut counts = vec![0usize; bins];
        for &s in slacks {
            let bin = (((s - lo) / width) * bins as f64) as usize;
            counts[bin.min(bins - 1)] += 1;
        }
        SlackHistogram { lo, hi, counts }
    }
}

/// Aggregate outcome of a theorem check over an ensemble.
#[derive(Clone, Debug, Serialize)]
pub struct EnsembleReport {
    pub theorem_id: String,
    pub spec: EnsembleSpec,
    pub trials: usize,
    pub passes: usize,
    /// Replay keys of trials that still fail after the retry, sorted.
    pub failures: Vec<ReplayKey>,
    /// Trials that needed the 4x-starts retry.
    pub retried: usize,
    /// Notes collected from non-passing or noteworthy trials.
    pub findings: Vec<String>,
    pub min_slack: f64,
    pub histogram: SlackHistogram,
}

/// Per-row outcome of [`reproduce_reference_values`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    /// Out of tolerance but within the documented reporting window; not a
    /// hard failure.
    Finding,
    Fail,
}

/// How a row's computed value is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    /// Entropy arithmetic only; tolerance 1e-6.
    Closed,
    /// Depends on a basis search; tolerance 1e-4 to 1e-3.
    Search,
}

/// One row of the reference-value table.
#[derive(Clone, Debug, Serialize)]
pub struct ReferenceRow {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub kind: RowKind,
    pub status: RowStatus,
}

fn merge_search_diagnostics(
    diagnostics: &mut BTreeMap<String, f64>,
    label: &str,
    search: &Option<crate::basis::BasisSearchResult>,
) {
    if let Some(s) = search {
        diagnostics.insert(format!("{label}.starts"), s.starts_used as f64);
        diagnostics.insert(format!("{label}.iterations"), s.iterations as f64);
        diagnostics.insert(format!("{label}.converged"), if s.converged { 1.0 } else { 0.0 });
    }
}

/// Runs `f`; on failure retries once with 4x the random starts and keeps the
/// retried report (marked with `retries_used = 1` and a note if it still
/// fails).
fn run_with_retry<F>(config: &SearchConfig, f: F) -> Result<TheoremReport>
where
    F: Fn(&SearchConfig) -> Result<TheoremReport>,
{
    let first = f(config)?;
    if first.pass {
        return Ok(first);
    }
    let boosted = config.with_more_starts(4);
    let mut second = f(&boosted)?;
    second.retries_used = 1;
    if !second.pass {
        second.notes.push(format!(
            "violation persists after retry with {} starts (binding slack {:.3e})",
            boosted.random_starts, second.slack
        ));
    }
    Ok(second)
}

/// Checks the decomposition chain `Q ≤ C ≤ Q + D` together with the exact
/// closed-path identity `C + L = Q + D` and the sign of the entropic cost,
/// all evaluated at the discord witness basis.
pub fn check_decomposition(
    rho: &DensityMatrix,
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<TheoremReport> {
    run_with_retry(config, |cfg| {
        let d = ck_decomposition(rho, reference, cfg)?;
        let mut terms = BTreeMap::new();
        terms.insert("C".into(), d.coherence);
        terms.insert("Q".into(), d.discord);
        terms.insert("D".into(), d.dissonance);
        terms.insert("L".into(), d.entropic_cost);

        let bounds = vec![
            BoundCheck::new("discord <= coherence", d.discord, d.coherence),
            BoundCheck::new(
                "coherence <= discord + dissonance",
                d.coherence,
                d.discord + d.dissonance,
            ),
            BoundCheck::new("entropic cost nonnegative", 0.0, d.entropic_cost),
        ];
        let identities = vec![IdentityCheck::new(
            "closed path: C + L = Q + D",
            (d.coherence + d.entropic_cost) - (d.discord + d.dissonance),
            tol::WITNESS,
        )];

        let mut diagnostics = BTreeMap::new();
        merge_search_diagnostics(&mut diagnostics, "discord", &Some(d.search.clone()));

        let mut notes = Vec::new();
        if d.entropic_cost < -tol::SLACK {
            notes.push(format!(
                "entropic cost is negative at the discord witness: L = {:.6e}",
                d.entropic_cost
            ));
        }
        Ok(TheoremReport::assemble(
            "1",
            "(state)",
            terms,
            bounds,
            identities,
            diagnostics,
            notes,
        ))
    })
}

/// Checks the one-way version of the decomposition chain on the `measured`
/// subsystems: `Q^{A|B} ≤ C^{A|B} ≤ Q^{A|B} + D^{A|B}`.
pub fn check_oneway_chain(
    rho: &DensityMatrix,
    measured: &[usize],
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<TheoremReport> {
    run_with_retry(config, |cfg| {
        let c_cond = qi_coherence(rho, measured, reference)?;
        let q = one_way_discord(rho, measured, cfg)?;
        let d = one_way_dissonance(rho, measured, reference, cfg)?;

        let mut terms = BTreeMap::new();
        terms.insert("C_cond".into(), c_cond.value);
        terms.insert("Q_oneway".into(), q.value);
        terms.insert("D_oneway".into(), d.value);

        let bounds = vec![
            BoundCheck::new(
                "one-way discord <= conditional coherence",
                q.value,
                c_cond.value,
            ),
            BoundCheck::new(
                "conditional coherence <= one-way discord + dissonance",
                c_cond.value,
                q.value + d.value,
            ),
        ];

        let mut diagnostics = BTreeMap::new();
        merge_search_diagnostics(&mut diagnostics, "oneway_discord", &q.search);

        Ok(TheoremReport::assemble(
            "oneway",
            "(state)",
            terms,
            bounds,
            Vec::new(),
            diagnostics,
            Vec::new(),
        ))
    })
}

/// Checks the two closed-form-flavored bounds on the conditional coherence
/// of the `measured` subsystems:
/// `C^{A|B} ≤ C(AB) − C(B)` and `Θ^{A|B} + C(A) ≤ C^{A|B}`.
pub fn check_conditional_bounds(
    rho: &DensityMatrix,
    measured: &[usize],
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<TheoremReport> {
    let n = rho.n_subsystems();
    let rest: Vec<usize> = (0..n).filter(|i| !measured.contains(i)).collect();
    run_with_retry(config, |cfg| {
        let c_cond = qi_coherence(rho, measured, reference)?;
        let c_joint = coherence(rho, reference)?;
        let rho_rest = rho.partial_trace(&rest)?;
        let basis_rest = restrict_basis(reference, &rest)?;
        let c_rest = coherence(&rho_rest, &basis_rest)?;
        let rho_meas = rho.partial_trace(measured)?;
        let basis_meas = restrict_basis(reference, measured)?;
        let c_meas = coherence(&rho_meas, &basis_meas)?;
        let theta = zurek_discord(rho, measured, cfg)?;

        let mut terms = BTreeMap::new();
        terms.insert("C_cond".into(), c_cond.value);
        terms.insert("C_joint".into(), c_joint.value);
        terms.insert("C_measured".into(), c_meas.value);
        terms.insert("C_rest".into(), c_rest.value);
        terms.insert("theta_oneway".into(), theta.value);

        let bounds = vec![
            BoundCheck::new(
                "conditional coherence <= joint minus rest",
                c_cond.value,
                c_joint.value - c_rest.value,
            ),
            BoundCheck::new(
                "information loss + measured coherence <= conditional coherence",
                theta.value + c_meas.value,
                c_cond.value,
            ),
        ];

        let mut diagnostics = BTreeMap::new();
        merge_search_diagnostics(&mut diagnostics, "theta_oneway", &theta.search);

        Ok(TheoremReport::assemble(
            "bounds",
            "(state)",
            terms,
            bounds,
            Vec::new(),
            diagnostics,
            Vec::new(),
        ))
    })
}

/// Checks the bipartite trade-off using the one-way information loss:
/// `Θ^{A|B} + C(A) + C(B) ≤ C(AB)` (measurement on subsystem 0).
pub fn check_measured_tradeoff(
    rho: &DensityMatrix,
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<TheoremReport> {
    if rho.n_subsystems() != 2 {
        return Err(Error::BadPartition(
            "the bipartite trade-off needs exactly two subsystems".into(),
        ));
    }
    run_with_retry(config, |cfg| {
        let (c_joint, c_a, c_b) = local_coherences(rho, reference)?;
        let theta = zurek_discord(rho, &[0], cfg)?;

        let mut terms = BTreeMap::new();
        terms.insert("theta_oneway".into(), theta.value);
        terms.insert("C_a".into(), c_a);
        terms.insert("C_b".into(), c_b);
        terms.insert("C_joint".into(), c_joint);

        let bounds = vec![BoundCheck::new(
            "information loss + local coherences <= joint coherence",
            theta.value + c_a + c_b,
            c_joint,
        )];

        let mut diagnostics = BTreeMap::new();
        merge_search_diagnostics(&mut diagnostics, "theta_oneway", &theta.search);

        Ok(TheoremReport::assemble(
            "2",
            "(state)",
            terms,
            bounds,
            Vec::new(),
            diagnostics,
            Vec::new(),
        ))
    })
}

/// Checks the symmetric variant of the bipartite trade-off:
/// `Θ + C(A) + C(B) ≤ C(AB)`, plus the ordering `Θ ≥ Θ^{A|B}` up to
/// optimizer slack (the symmetric loss measures over a strictly smaller
/// set of surviving correlations, so it cannot be smaller).
pub fn check_symmetric_tradeoff(
    rho: &DensityMatrix,
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<TheoremReport> {
    if rho.n_subsystems() != 2 {
        return Err(Error::BadPartition(
            "the bipartite trade-off needs exactly two subsystems".into(),
        ));
    }
    // Extra cushion for comparing two independently optimized quantities.
    const ORDERING_TOL: f64 = 1e-6;
    run_with_retry(config, |cfg| {
        let (c_joint, c_a, c_b) = local_coherences(rho, reference)?;
        let theta_sym = symmetric_discord(rho, cfg)?;
        let theta_oneway = zurek_discord(rho, &[0], cfg)?;

        let mut terms = BTreeMap::new();
        terms.insert("theta_sym".into(), theta_sym.value);
        terms.insert("theta_oneway".into(), theta_oneway.value);
        terms.insert("C_a".into(), c_a);
        terms.insert("C_b".into(), c_b);
        terms.insert("C_joint".into(), c_joint);

        let bounds = vec![
            BoundCheck::new(
                "symmetric information loss + local coherences <= joint coherence",
                theta_sym.value + c_a + c_b,
                c_joint,
            ),
            BoundCheck::new(
                "one-way loss <= symmetric loss",
                theta_oneway.value,
                theta_sym.value + ORDERING_TOL,
            ),
        ];

        let mut diagnostics = BTreeMap::new();
        merge_search_diagnostics(&mut diagnostics, "theta_sym", &theta_sym.search);
        merge_search_diagnostics(&mut diagnostics, "theta_oneway", &theta_oneway.search);

        Ok(TheoremReport::assemble(
            "3",
            "(state)",
            terms,
            bounds,
            Vec::new(),
            diagnostics,
            Vec::new(),
        ))
    })
}

/// Checks the multipartite trade-offs: the chain form
/// `Σ_i Θ^{i|i+1..N} + Σ_i C(ρ^i) ≤ C(ρ)` and the symmetric form
/// `Θ(ρ) + Σ_i C(ρ^i) ≤ C(ρ)`. For more than two subsystems the symmetric
/// information loss is interpreted through the total correlation, which is
/// noted in the report.
pub fn check_chain_tradeoff(
    rho: &DensityMatrix,
    reference: &ProductBasis,
    config: &SearchConfig,
) -> Result<TheoremReport> {
    let n = rho.n_subsystems();
    if n < 2 {
        return Err(Error::BadPartition(
            "the chain trade-off needs at least two subsystems".into(),
        ));
    }
    run_with_retry(config, |cfg| {
        let c_joint = coherence(rho, reference)?.value;
        let mut local_sum = 0.0;
        let mut terms = BTreeMap::new();
        for i in 0..n {
            let rho_i = rho.partial_trace(&[i])?;
            let basis_i = restrict_basis(reference, &[i])?;
            let c_i = coherence(&rho_i, &basis_i)?.value;
            terms.insert(format!("C_{i}"), c_i);
            local_sum += c_i;
        }

        let chain = chain_discord_sum(rho, cfg)?;
        let mut chain_sum = 0.0;
        let mut diagnostics = BTreeMap::new();
        for (i, link) in chain.iter().enumerate() {
            terms.insert(format!("theta_chain_{i}"), link.value);
            chain_sum += link.value;
            merge_search_diagnostics(&mut diagnostics, &format!("theta_chain_{i}"), &link.search);
        }
        let theta_multi = symmetric_discord(rho, cfg)?;
        merge_search_diagnostics(&mut diagnostics, "theta_multi", &theta_multi.search);

        terms.insert("chain_sum".into(), chain_sum);
        terms.insert("theta_multi".into(), theta_multi.value);
        terms.insert("local_coherence_sum".into(), local_sum);
        terms.insert("C_joint".into(), c_joint);

        let bounds = vec![
            BoundCheck::new(
                "chain information loss + local coherences <= joint coherence",
                chain_sum + local_sum,
                c_joint,
            ),
            BoundCheck::new(
                "multipartite information loss + local coherences <= joint coherence",
                theta_multi.value + local_sum,
                c_joint,
            ),
        ];

        let mut notes = Vec::new();
        if n > 2 {
            notes.push(
                "multipartite information loss computed from the total correlation".into(),
            );
        }

        Ok(TheoremReport::assemble(
            "4",
            "(state)",
            terms,
            bounds,
            Vec::new(),
            diagnostics,
            notes,
        ))
    })
}

/// Runs the tripartite coherence-distribution check on a scenario with
/// subsystems (A, B, R): the coherence gained by attaching R to A cannot
/// exceed the conditional coherence carried by R,
/// `C^{AR|B}(ρ_out) − C^{A|BR}(ρ_in) ≤ C^{R|AB}(ρ_out)`,
/// where `ρ_out` is the state after the optional incoherent channel on R.
/// For a pure input with no channel, the dephased pair additionally
/// satisfies `S(δ(ρ^{AR})) ≤ S(δ(ρ^A)) + S(δ(ρ^R))`, reported as an extra
/// bound.
pub fn run_distribution(scenario: &DistributionScenario) -> Result<TheoremReport> {
    let rho_in = &scenario.initial;
    if rho_in.n_subsystems() != 3 {
        return Err(Error::BadPartition(format!(
            "the distribution scenario needs exactly three subsystems, got {}",
            rho_in.n_subsystems()
        )));
    }
    if scenario.reference.dims() != rho_in.dims() {
        return Err(Error::DimensionMismatch(format!(
            "reference basis dimensions {:?} do not match state dimensions {:?}",
            scenario.reference.dims(),
            rho_in.dims()
        )));
    }
    let theorem_id;
    let rho_out = match &scenario.channel {
        Some(ch) => {
            theorem_id = "6";
            if ch.output_dim() != ch.input_dim() {
                return Err(Error::BadParameter(
                    "the distribution scenario needs a square channel on R".into(),
                ));
            }
            ch.certify_incoherent()?;
            apply_channel(ch, rho_in, DistributionScenario::R)?
        }
        None => {
            theorem_id = "5";
            rho_in.clone()
        }
    };

    let reference = &scenario.reference;
    let c_ar_out = qi_coherence(&rho_out, &[0, 2], reference)?.value;
    let c_a_in = qi_coherence(rho_in, &[0], reference)?.value;
    let c_r_out = qi_coherence(&rho_out, &[2], reference)?.value;

    let mut terms = BTreeMap::new();
    terms.insert("C_ar_given_b_out".into(), c_ar_out);
    terms.insert("C_a_given_br_in".into(), c_a_in);
    terms.insert("C_r_given_ab_out".into(), c_r_out);

    let mut bounds = vec![BoundCheck::new(
        "distributed gain <= helper coherence",
        c_ar_out - c_a_in,
        c_r_out,
    )];

    let mut notes = Vec::new();
    if scenario.channel.is_none() && rho_in.purity() >= 1.0 - 1e-9 {
        let pair = rho_in.partial_trace(&[0, 2])?;
        let pair_basis = restrict_basis(reference, &[0, 2])?;
        let dephased = pair.dephase(&pair_basis, &[0, 1])?;
        let s_pair = dephased.entropy();
        let s_a = dephased.partial_trace(&[0])?.entropy();
        let s_r = dephased.partial_trace(&[1])?.entropy();
        terms.insert("S_pair_dephased".into(), s_pair);
        terms.insert("S_a_dephased".into(), s_a);
        terms.insert("S_r_dephased".into(), s_r);
        bounds.push(BoundCheck::new(
            "dephased pair subadditivity",
            s_pair,
            s_a + s_r,
        ));
        notes.push("pure input: dephased-pair subadditivity bound included".into());
    }

    Ok(TheoremReport::assemble(
        theorem_id,
        "(state)",
        terms,
        bounds,
        Vec::new(),
        BTreeMap::new(),
        notes,
    ))
}

fn local_coherences(
    rho: &DensityMatrix,
    reference: &ProductBasis,
) -> Result<(f64, f64, f64)> {
    let c_joint = coherence(rho, reference)?.value;
    let rho_a = rho.partial_trace(&[0])?;
    let rho_b = rho.partial_trace(&[1])?;
    let c_a = coherence(&rho_a, &restrict_basis(reference, &[0])?)?.value;
    let c_b = coherence(&rho_b, &restrict_basis(reference, &[1])?)?.value;
    Ok((c_joint, c_a, c_b))
}

/// Basis on the kept subsystems only, preserving each local frame.
fn restrict_basis(basis: &ProductBasis, keep: &[usize]) -> Result<ProductBasis> {
    let dims: Vec<usize> = keep.iter().map(|&i| basis.dims()[i]).collect();
    let locals: Vec<_> = keep.iter().map(|&i| basis.local(i).clone()).collect();
    ProductBasis::new(&dims, locals)
}

/// theorem ids accepted by [`verify_ensemble`].
pub fn registered_theorems() -> &'static [&'static str] {
    &["1", "2", "3", "4", "5", "6", "oneway", "bounds"]
}

fn dispatch_check(
    theorem_id: &str,
    rho: &DensityMatrix,
    reference: &ProductBasis,
    config: &SearchConfig,
    channel_seed: u64,
) -> Result<TheoremReport> {
    match theorem_id {
        "1" => check_decomposition(rho, reference, config),
        "2" => check_measured_tradeoff(rho, reference, config),
        "3" => check_symmetric_tradeoff(rho, reference, config),
        "4" => check_chain_tradeoff(rho, reference, config),
        "5" | "6" => {
            if rho.n_subsystems() != 3 {
                return Err(Error::BadPartition(format!(
                    "theorem {theorem_id} needs three subsystems, got {}",
                    rho.n_subsystems()
                )));
            }
            let channel = if theorem_id == "6" {
                Some(random_incoherent_channel(rho.dims()[2], channel_seed))
            } else {
                None
            };
            let scenario = DistributionScenario {
                initial: rho.clone(),
                channel,
                reference: reference.clone(),
            };
            run_distribution(&scenario)
        }
        "oneway" => check_oneway_chain(rho, &[0], reference, config),
        "bounds" => check_conditional_bounds(rho, &[0], reference, config),
        other => Err(Error::UnknownTheorem(other.to_string())),
    }
}

/// Runs the per-state check for `theorem_id` over every state in the
/// ensemble and aggregates. Trials run in parallel; the aggregation is
/// deterministic given (spec, config).
pub fn verify_ensemble(
    theorem_id: &str,
    spec: &EnsembleSpec,
    config: &SearchConfig,
) -> Result<EnsembleReport> {
    Ok(verify_ensemble_with_reports(theorem_id, spec, config)?.0)
}

/// Like [`verify_ensemble`] but also returns the per-trial reports in
/// trial order.
pub fn verify_ensemble_with_reports(
    theorem_id: &str,
    spec: &EnsembleSpec,
    config: &SearchConfig,
) -> Result<(EnsembleReport, Vec<TheoremReport>)> {
    if !registered_theorems().contains(&theorem_id) {
        return Err(Error::UnknownTheorem(theorem_id.to_string()));
    }
    let reference = ProductBasis::computational(&spec.dims);
    let results: Vec<Result<TheoremReport>> = ordered_collect(spec.count, |index| {
        let rho = random_state(spec, index)?;
        let channel_seed = spec.seed.wrapping_add(CHANNEL_SEED_OFFSET).wrapping_add(index as u64);
        let mut report = dispatch_check(theorem_id, &rho, &reference, config, channel_seed)?;
        report.state = format!("seed={},index={}", spec.seed, index);
        Ok(report)
    });
    let mut reports = Vec::with_capacity(spec.count);
    for r in results {
        reports.push(r?);
    }

    let mut failures = Vec::new();
    let mut findings = Vec::new();
    let mut retried = 0;
    let mut min_slack = f64::INFINITY;
    let mut slacks = Vec::with_capacity(reports.len());
    for (index, report) in reports.iter().enumerate() {
        slacks.push(report.slack);
        min_slack = min_slack.min(report.slack);
        retried += report.retries_used;
        if !report.pass {
            failures.push(ReplayKey { seed: spec.seed, index });
        }
        for note in &report.notes {
            if !report.pass {
                findings.push(format!("{}: {}", report.state, note));
            }
        }
    }
    failures.sort();
    let trials = reports.len();
    let passes = trials - failures.len();
    if trials == 0 {
        min_slack = 0.0;
    }

    let ensemble = EnsembleReport {
        theorem_id: theorem_id.to_string(),
        spec: spec.clone(),
        trials,
        passes,
        failures,
        retried,
        findings,
        min_slack,
        histogram: SlackHistogram::from_slacks(&slacks, 20),
    };
    Ok((ensemble, reports))
}

const REFERENCE_CLOSED_TOL: f64 = 1e-6;
const REFERENCE_SEARCH_TOL: f64 = 1e-4;
const REFERENCE_LOOSE_TOL: f64 = 1e-3;
/// Deviations beyond tolerance but inside this window are reported as
/// findings (the underlying equality claims are cited, not proved).
const FINDING_WINDOW: f64 = 0.05;

struct RowRecipe {
    name: &'static str,
    expected: f64,
    tolerance: f64,
    kind: RowKind,
    /// Whether an out-of-tolerance result within [`FINDING_WINDOW`] is a
    /// finding instead of a failure.
    soft: bool,
    compute: fn(&SearchConfig) -> Result<f64>,
}

fn decomposition_term(
    state: &NamedState,
    pick: fn(&crate::measures::CoherenceDecomposition) -> f64,
    config: &SearchConfig,
) -> Result<f64> {
    let rho = named_state(state)?;
    let reference = ProductBasis::computational(rho.dims());
    Ok(pick(&ck_decomposition(&rho, &reference, config)?))
}

fn datta_term(pick: fn(&DensityMatrix, &SearchConfig) -> Result<f64>, config: &SearchConfig) -> Result<f64> {
    let rho = named_state(&NamedState::Datta)?;
    pick(&rho, config)
}

fn werner_equality_gap(p: f64, config: &SearchConfig) -> Result<f64> {
    let rho = named_state(&NamedState::Werner(p))?;
    let reference = ProductBasis::computational(rho.dims());
    let report = check_measured_tradeoff(&rho, &reference, config)?;
    Ok(report.bounds[0].slack)
}

fn reference_rows() -> Vec<RowRecipe> {
    vec![
        RowRecipe {
            name: "plus_plus.C",
            expected: 2.0,
            tolerance: REFERENCE_CLOSED_TOL,
            kind: RowKind::Closed,
            soft: false,
            compute: |cfg| decomposition_term(&NamedState::PlusPlus, |d| d.coherence, cfg),
        },
        RowRecipe {
            name: "plus_plus.Q",
            expected: 0.0,
            tolerance: REFERENCE_SEARCH_TOL,
            kind: RowKind::Search,
            soft: false,
            compute: |cfg| decomposition_term(&NamedState::PlusPlus, |d| d.discord, cfg),
        },
        RowRecipe {
            name: "plus_plus.D",
            expected: 2.0,
            tolerance: REFERENCE_SEARCH_TOL,
            kind: RowKind::Search,
            soft: false,
            compute: |cfg| decomposition_term(&NamedState::PlusPlus, |d| d.dissonance, cfg),
        },
        RowRecipe {
            name: "plus_plus.L",
            expected: 0.0,
            tolerance: REFERENCE_SEARCH_TOL,
            kind: RowKind::Search,
            soft: false,
            compute: |cfg| decomposition_term(&NamedState::PlusPlus, |d| d.entropic_cost, cfg),
        },
        RowRecipe {
            name: "bell.C",
            expected: 1.0,
            tolerance: REFERENCE_CLOSED_TOL,
            kind: RowKind::Closed,
            soft: false,
            compute: |cfg| decomposition_term(&NamedState::Bell, |d| d.coherence, cfg),
        },
        RowRecipe {
            name: "bell.Q",
            expected: 1.0,
            tolerance: REFERENCE_SEARCH_TOL,
            kind: RowKind::Search,
            soft: false,
            compute: |cfg| decomposition_term(&NamedState::Bell, |d| d.discord, cfg),
        },
        RowRecipe {
            name: "bell.D",
            expected: 0.0,
            tolerance: REFERENCE_SEARCH_TOL,
            kind: RowKind::Search,
            soft: false,
            compute: |cfg| decomposition_term(&NamedState::Bell, |d| d.dissonance, cfg),
        },
        RowRecipe {
            name: "bell.L",
            expected: 0.0,
            tolerance: REFERENCE_SEARCH_TOL,
            kind: RowKind::Search,
            soft: false,
            compute: |cfg| decomposition_term(&NamedState::Bell, |d| d.entropic_cost, cfg),
        },
        RowRecipe {
            name: "datta.C",
            expected: 0.5,
            tolerance: REFERENCE_CLOSED_TOL,
            kind: RowKind::Closed,
            soft: false,
            compute: |cfg| {
                datta_term(
                    |rho, _| {
                        let basis = ProductBasis::computational(rho.dims());
                        Ok(coherence(rho, &basis)?.value)
                    },
                    cfg,
                )
            },
        },
        RowRecipe {
            name: "datta.C_a",
            expected: 0.0,
            tolerance: REFERENCE_CLOSED_TOL,
            kind: RowKind::Closed,
            soft: false,
            compute: |cfg| {
                datta_term(
                    |rho, _| {
                        let a = rho.partial_trace(&[0])?;
                        Ok(coherence(&a, &ProductBasis::computational(&[2]))?.value)
                    },
                    cfg,
                )
            },
        },
        RowRecipe {
            name: "datta.C_b",
            expected: 0.0,
            tolerance: REFERENCE_CLOSED_TOL,
            kind: RowKind::Closed,
            soft: false,
            compute: |cfg| {
                datta_term(
                    |rho, _| {
                        let b = rho.partial_trace(&[1])?;
                        Ok(coherence(&b, &ProductBasis::computational(&[2]))?.value)
                    },
                    cfg,
                )
            },
        },
        RowRecipe {
            name: "datta.theta",
            expected: 0.311,
            tolerance: REFERENCE_LOOSE_TOL,
            kind: RowKind::Search,
            soft: false,
            compute: |cfg| datta_term(|rho, c| Ok(zurek_discord(rho, &[0], c)?.value), cfg),
        },
        RowRecipe {
            name: "werner_0.2.equality_gap",
            expected: 0.0,
            tolerance: REFERENCE_LOOSE_TOL,
            kind: RowKind::Search,
            soft: true,
            compute: |cfg| werner_equality_gap(0.2, cfg),
        },
        RowRecipe {
            name: "werner_0.5.equality_gap",
            expected: 0.0,
            tolerance: REFERENCE_LOOSE_TOL,
            kind: RowKind::Search,
            soft: true,
            compute: |cfg| werner_equality_gap(0.5, cfg),
        },
        RowRecipe {
            name: "werner_0.8.equality_gap",
            expected: 0.0,
            tolerance: REFERENCE_LOOSE_TOL,
            kind: RowKind::Search,
            soft: true,
            compute: |cfg| werner_equality_gap(0.8, cfg),
        },
        RowRecipe {
            name: "ghz3.dephased_subadditivity_slack",
            expected: 1.0,
            tolerance: REFERENCE_CLOSED_TOL,
            kind: RowKind::Closed,
            soft: false,
            compute: |_| {
                let rho = named_state(&NamedState::Ghz(3))?;
                let scenario = DistributionScenario {
                    reference: ProductBasis::computational(rho.dims()),
                    initial: rho,
                    channel: None,
                };
                let report = run_distribution(&scenario)?;
                Ok(report
                    .bound("dephased pair subadditivity")
                    .expect("pure input records the subadditivity bound")
                    .slack)
            },
        },
    ]
}

/// Recomputes every published closed-form and optimized value and compares
/// against its expectation. Search-based rows that miss their tolerance get
/// one retry with 4x starts; rows marked soft degrade to
/// [`RowStatus::Finding`] inside the reporting window instead of failing.
pub fn reproduce_reference_values(config: &SearchConfig) -> Result<Vec<ReferenceRow>> {
    let recipes = reference_rows();
    let results: Vec<Result<ReferenceRow>> = ordered_collect(recipes.len(), |i| {
        let recipe = &recipes[i];
        let mut computed = (recipe.compute)(config)?;
        let mut delta = (computed - recipe.expected).abs();
        if delta > recipe.tolerance && recipe.kind == RowKind::Search {
            computed = (recipe.compute)(&config.with_more_starts(4))?;
            delta = (computed - recipe.expected).abs();
        }
        let status = if delta <= recipe.tolerance {
            RowStatus::Pass
        } else if recipe.soft && delta <= FINDING_WINDOW {
            RowStatus::Finding
        } else {
            RowStatus::Fail
        };
        Ok(ReferenceRow {
            name: recipe.name.to_string(),
            expected: recipe.expected,
            computed,
            delta,
            tolerance: recipe.tolerance,
            kind: recipe.kind,
            status,
        })
    });
    results.into_iter().collect()
}
