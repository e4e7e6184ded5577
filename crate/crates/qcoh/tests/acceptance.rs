//! End-to-end acceptance suite. Each test prints exactly one
//! `[PASS]`/`[FAIL]` line summarizing what was checked and the observed
//! numbers (run with `--nocapture` to see the lines for passing tests),
//! then asserts.
//!
//! Tolerances used throughout: closed-form values 1e-6, optimized values
//! 1e-4 (loose 1e-3 where an inner search feeds a published approximate
//! value), inequality slack -1e-8, seeding-guaranteed slack -1e-9.

use num_complex::Complex64;
use qcoh::basis::SearchConfig;
use qcoh::channels::random_incoherent_channel;
use qcoh::eigh::eigh;
use qcoh::ensembles::{named_state, random_state, EnsembleKind, EnsembleSpec, NamedState};
use qcoh::measures::{ck_decomposition, coherence, discord, zurek_discord};
use qcoh::state::{DensityMatrix, ProductBasis};
use qcoh::verifier::{check_chain_tradeoff, verify_ensemble_with_reports, RowStatus};
use qcoh::cmat::CMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const SLACK_TOL: f64 = 1e-8;
const SEED_GUARANTEE_TOL: f64 = 1e-9;

fn verdict(ok: bool, name: &str, detail: &str) -> bool {
    println!("[{}] {name} — {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn default_config() -> SearchConfig {
    SearchConfig::default()
}

fn induced(dims: &[usize], count: usize) -> EnsembleSpec {
    EnsembleSpec {
        kind: EnsembleKind::InducedMixed,
        dims: dims.to_vec(),
        count,
        seed: 7,
    }
}

#[test]
fn product_and_bell_states_reproduce_closed_form_decompositions() {
    let started = Instant::now();
    let config = default_config();
    let reference = ProductBasis::computational(&[2, 2]);

    let plus = ck_decomposition(
        &named_state(&NamedState::PlusPlus).unwrap(),
        &reference,
        &config,
    )
    .unwrap();
    let bell = ck_decomposition(&named_state(&NamedState::Bell).unwrap(), &reference, &config)
        .unwrap();

    let closed_ok = (plus.coherence - 2.0).abs() <= 1e-6 && (bell.coherence - 1.0).abs() <= 1e-6;
    let optimized_ok = plus.discord.abs() <= 1e-4
        && (plus.dissonance - 2.0).abs() <= 1e-4
        && plus.entropic_cost.abs() <= 1e-4
        && (bell.discord - 1.0).abs() <= 1e-4
        && bell.dissonance.abs() <= 1e-4
        && bell.entropic_cost.abs() <= 1e-4;
    let elapsed = started.elapsed().as_secs_f64();
    let ok = closed_ok && optimized_ok && elapsed < 5.0;
    assert!(verdict(
        ok,
        "closed-form decompositions",
        &format!(
            "|+>|+>: C={:.6} Q={:.2e} D={:.6} L={:.2e}; bell: C={:.6} Q={:.6} D={:.2e} L={:.2e}; {:.2}s (cap 5s)",
            plus.coherence,
            plus.discord,
            plus.dissonance,
            plus.entropic_cost,
            bell.coherence,
            bell.discord,
            bell.dissonance,
            bell.entropic_cost,
            elapsed
        ),
    ));
}

#[test]
fn datta_state_reproduces_published_information_loss_and_coherence() {
    let started = Instant::now();
    let config = default_config();
    let rho = named_state(&NamedState::Datta).unwrap();
    let reference = ProductBasis::computational(&[2, 2]);

    let theta = zurek_discord(&rho, &[0], &config).unwrap().value;
    let c = coherence(&rho, &reference).unwrap().value;
    let c_a = coherence(
        &rho.partial_trace(&[0]).unwrap(),
        &ProductBasis::computational(&[2]),
    )
    .unwrap()
    .value;
    let c_b = coherence(
        &rho.partial_trace(&[1]).unwrap(),
        &ProductBasis::computational(&[2]),
    )
    .unwrap()
    .value;

    let elapsed = started.elapsed().as_secs_f64();
    let ok = (theta - 0.311).abs() <= 1e-3
        && (c - 0.5).abs() <= 1e-6
        && c_a.abs() <= 1e-6
        && c_b.abs() <= 1e-6
        && elapsed < 30.0;
    assert!(verdict(
        ok,
        "mixed four-projector state",
        &format!(
            "theta={theta:.6} (expect 0.311±1e-3), C={c:.9} (expect 0.5±1e-6), C_A={c_a:.2e}, C_B={c_b:.2e}; {elapsed:.2}s (cap 30s)"
        ),
    ));
}

#[test]
fn werner_family_equality_holds_within_reporting_tolerance() {
    // The equality claim is checked through the production retry path: a
    // deviation beyond 1e-3 that survives the 4x-start retry is a finding;
    // only a deviation beyond 0.05 fails.
    let rows = qcoh::verifier::reproduce_reference_values(&default_config()).unwrap();
    let werner: Vec<_> = rows
        .iter()
        .filter(|r| r.name.starts_with("werner_"))
        .collect();
    assert_eq!(werner.len(), 3);
    let mut detail = String::new();
    let mut ok = true;
    for row in &werner {
        detail.push_str(&format!("{}: gap={:.2e} {:?}; ", row.name, row.delta, row.status));
        match row.status {
            RowStatus::Pass => {}
            RowStatus::Finding => detail.push_str("(finding, within 0.05 window) "),
            RowStatus::Fail => ok = false,
        }
    }
    assert!(verdict(ok, "Werner equality at p=0.2/0.5/0.8", detail.trim()));
}

#[test]
fn induced_two_qubit_ensemble_decomposition_bounds() {
    let started = Instant::now();
    let spec = induced(&[2, 2], 500);
    let (ensemble, reports) =
        verify_ensemble_with_reports("1", &spec, &default_config()).unwrap();

    let mut lower_ok = 0usize;
    let mut upper_after = 0usize;
    let mut worst = (f64::INFINITY, 0usize);
    for (index, report) in reports.iter().enumerate() {
        let lower = report.bound("discord <= coherence").unwrap();
        if lower.slack >= -SEED_GUARANTEE_TOL {
            lower_ok += 1;
        }
        let upper = report.bound("coherence <= discord + dissonance").unwrap();
        if upper.pass {
            upper_after += 1;
        }
        if upper.slack < worst.0 {
            worst = (upper.slack, index);
        }
    }
    // A retry is triggered exactly by a first-attempt failure, so the
    // pre-retry pass count is the trials that never needed one.
    let upper_before = reports.len() - ensemble.retried;

    let elapsed = started.elapsed().as_secs_f64();
    let ok = lower_ok == 500 && upper_before >= 498 && upper_after == 500 && elapsed < 600.0;
    assert!(
        verdict(
            ok,
            "decomposition bounds on 500 induced two-qubit states",
            &format!(
                "lower bound {lower_ok}/500 (needs 500); upper bound {upper_before}/500 before retry (needs >=498), \
                 {upper_after}/500 after retry (needs 500); worst upper slack {:.3e} at seed=7,index={}; {:.0}s (cap 600s). \
                 Persistent violations have genuinely negative entropic cost at the discord witness \
                 (dephasing the nearest classical state can lower entropy below the dephased input); \
                 4x-start retries do not rescue them, so they are a property of the measures, not of the optimizer.",
                worst.0, worst.1, elapsed
            ),
        ),
        "see the [FAIL] line above for the violation census"
    );
}

#[test]
fn induced_two_qubit_ensemble_oneway_chain_and_conditional_bounds() {
    let spec = induced(&[2, 2], 500);
    let config = default_config();

    let (chain_ensemble, _) = verify_ensemble_with_reports("oneway", &spec, &config).unwrap();
    let (bounds_ensemble, bounds_reports) =
        verify_ensemble_with_reports("bounds", &spec, &config).unwrap();

    let mut closed_min = f64::INFINITY;
    for report in &bounds_reports {
        let closed = report.bound("conditional coherence <= joint minus rest").unwrap();
        closed_min = closed_min.min(closed.slack);
    }

    let ok = chain_ensemble.failures.is_empty()
        && bounds_ensemble.failures.is_empty()
        && closed_min >= -SLACK_TOL;
    assert!(verdict(
        ok,
        "one-way chain and conditional-coherence bounds on 500 induced two-qubit states",
        &format!(
            "chain: {}/{} after retries ({} retried); bounds: {}/{} after retries ({} retried); \
             min closed-form slack {:.3e} (floor -1e-8)",
            chain_ensemble.passes,
            chain_ensemble.trials,
            chain_ensemble.retried,
            bounds_ensemble.passes,
            bounds_ensemble.trials,
            bounds_ensemble.retried,
            closed_min
        ),
    ));
}

#[test]
fn induced_two_qubit_ensemble_bipartite_tradeoffs() {
    let spec = induced(&[2, 2], 300);
    let config = default_config();

    let (measured, _) = verify_ensemble_with_reports("2", &spec, &config).unwrap();
    let (symmetric, symmetric_reports) =
        verify_ensemble_with_reports("3", &spec, &config).unwrap();

    let mut ordering_ok = 0usize;
    for report in &symmetric_reports {
        if report.bound("one-way loss <= symmetric loss").unwrap().pass {
            ordering_ok += 1;
        }
    }

    let ok = measured.failures.is_empty()
        && symmetric.failures.is_empty()
        && ordering_ok == 300;
    assert!(verdict(
        ok,
        "bipartite trade-offs on 300 induced two-qubit states",
        &format!(
            "one-way form: {}/{} (min slack {:.3e}); symmetric form: {}/{} (min slack {:.3e}); \
             symmetric >= one-way loss on {ordering_ok}/300 states (1e-6 cushion)",
            measured.passes,
            measured.trials,
            measured.min_slack,
            symmetric.passes,
            symmetric.trials,
            symmetric.min_slack
        ),
    ));
}

#[test]
fn induced_three_qubit_ensemble_chain_tradeoffs_and_ghz_tightness() {
    let started = Instant::now();
    let spec = induced(&[2, 2, 2], 100);
    let config = default_config();
    let (ensemble, reports) = verify_ensemble_with_reports("4", &spec, &config).unwrap();

    let mut chain_min = f64::INFINITY;
    let mut multi_min = f64::INFINITY;
    for report in &reports {
        chain_min = chain_min.min(
            report
                .bound("chain information loss + local coherences <= joint coherence")
                .unwrap()
                .slack,
        );
        multi_min = multi_min.min(
            report
                .bound("multipartite information loss + local coherences <= joint coherence")
                .unwrap()
                .slack,
        );
    }

    let ghz = named_state(&NamedState::Ghz(3)).unwrap();
    let ghz_report =
        check_chain_tradeoff(&ghz, &ProductBasis::computational(&[2, 2, 2]), &config).unwrap();
    let ghz_chain_sum = ghz_report.terms["chain_sum"];
    let ghz_c = ghz_report.terms["C_joint"];
    let ghz_tight = (ghz_chain_sum - 1.0).abs() <= 1e-6 && (ghz_c - 1.0).abs() <= 1e-9;

    let elapsed = started.elapsed().as_secs_f64();
    let ok = ensemble.failures.is_empty()
        && chain_min >= -SLACK_TOL
        && multi_min >= -SLACK_TOL
        && ghz_tight
        && elapsed < 1200.0;
    assert!(verdict(
        ok,
        "chain trade-offs on 100 induced three-qubit states + GHZ tightness",
        &format!(
            "{}/{} passed; min chain slack {chain_min:.3e}, min multipartite slack {multi_min:.3e} (floor -1e-8); \
             GHZ: chain sum {ghz_chain_sum:.6} (expect 1), C {ghz_c:.6} (expect 1); {elapsed:.0}s (cap 1200s)",
            ensemble.passes, ensemble.trials
        ),
    ));
}

#[test]
fn tripartite_distribution_bound_and_pure_state_subadditivity() {
    let config = default_config();

    // Closed-form distribution bound on 200 induced tripartite states.
    let spec = induced(&[2, 2, 2], 200);
    let (mixed, _) = verify_ensemble_with_reports("5", &spec, &config).unwrap();

    // Dephased-pair subadditivity on 200 Haar-pure tripartite states.
    let pure_spec = EnsembleSpec {
        kind: EnsembleKind::HaarPure,
        dims: vec![2, 2, 2],
        count: 200,
        seed: 7,
    };
    let (pure, pure_reports) = verify_ensemble_with_reports("5", &pure_spec, &config).unwrap();
    let mut sub_ok = 0usize;
    let mut sub_min = f64::INFINITY;
    for report in &pure_reports {
        let bound = report
            .bound("dephased pair subadditivity")
            .expect("pure inputs always record the subadditivity bound");
        if bound.slack >= -SLACK_TOL {
            sub_ok += 1;
        }
        sub_min = sub_min.min(bound.slack);
    }

    let ok = mixed.failures.is_empty()
        && mixed.min_slack >= -SLACK_TOL
        && pure.failures.is_empty()
        && sub_ok == 200;
    assert!(verdict(
        ok,
        "coherence distribution without a channel",
        &format!(
            "mixed: {}/{} (min slack {:.3e}, closed form — no optimizer involved); \
             pure subadditivity: {sub_ok}/200 (min slack {sub_min:.3e})",
            mixed.passes, mixed.trials, mixed.min_slack
        ),
    ));
}

#[test]
fn incoherent_channel_distribution_bound_and_certificates() {
    let config = default_config();
    let spec = induced(&[2, 2, 2], 200);
    let (ensemble, _) = verify_ensemble_with_reports("6", &spec, &config).unwrap();

    // Certificates on an independent sample of generated channels.
    let mut cert_ok = 0usize;
    let mut worst_residual: f64 = 0.0;
    for seed in 0..200u64 {
        let ch = random_incoherent_channel(2, seed);
        let residual = ch.completeness_residual();
        worst_residual = worst_residual.max(residual);
        if residual <= 1e-10 && ch.certify_incoherent().is_ok() {
            cert_ok += 1;
        }
    }

    let ok = ensemble.failures.is_empty() && ensemble.min_slack >= -SLACK_TOL && cert_ok == 200;
    assert!(verdict(
        ok,
        "coherence distribution across incoherent channels",
        &format!(
            "{}/{} state-channel pairs passed (min slack {:.3e}); certificates {cert_ok}/200 \
             (worst completeness residual {worst_residual:.2e}, threshold 1e-10)",
            ensemble.passes, ensemble.trials, ensemble.min_slack
        ),
    ));
}

fn random_hermitian(rng: &mut impl Rng, side: usize) -> CMatrix {
    let mut m = CMatrix::zeros(side, side);
    for i in 0..side {
        m[(i, i)] = Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0);
        for j in i + 1..side {
            let z = Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

#[test]
fn kernel_reconstruction_relative_entropy_and_dephasing_properties() {
    // Eigendecomposition reconstruction on 1000 random Hermitian matrices
    // of side 2..=16.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut recon_ok = 0usize;
    let mut worst_recon: f64 = 0.0;
    for k in 0..1000 {
        let side = 2 + (k % 15);
        let a = random_hermitian(&mut rng, side);
        let spectrum = eigh(&a).unwrap();
        let residual = spectrum.reconstruct().max_abs_diff(&a);
        worst_recon = worst_recon.max(residual);
        if residual <= 1e-8 {
            recon_ok += 1;
        }
    }

    // Relative-entropy nonnegativity and the mutual-information identity
    // I(A:B) = S(rho || rho_A ⊗ rho_B) on 500 random pairs.
    let spec_a = induced(&[2, 2], 500);
    let spec_b = EnsembleSpec { seed: 8, ..induced(&[2, 2], 500) };
    let mut rel_ok = 0usize;
    let mut mi_ok = 0usize;
    let mut worst_mi: f64 = 0.0;
    for i in 0..500 {
        let rho = random_state(&spec_a, i).unwrap();
        let sigma = random_state(&spec_b, i).unwrap();
        if rho.relative_entropy(&sigma).unwrap() >= -1e-9 {
            rel_ok += 1;
        }
        let product = rho
            .partial_trace(&[0])
            .unwrap()
            .tensor(&rho.partial_trace(&[1]).unwrap());
        let delta =
            (rho.mutual_information(&[0]).unwrap() - rho.relative_entropy(&product).unwrap()).abs();
        worst_mi = worst_mi.max(delta);
        if delta <= 1e-8 {
            mi_ok += 1;
        }
    }

    // Dephasing idempotence and entropy monotonicity on 500 random
    // (state, basis) pairs.
    let spec = induced(&[2, 2], 500);
    let mut deph_ok = 0usize;
    for i in 0..500 {
        let rho = random_state(&spec, i).unwrap();
        let basis = qcoh::basis::haar_random_basis(&[2, 2], 1000 + i as u64);
        let once = rho.dephase(&basis, &[0, 1]).unwrap();
        let twice = once.dephase(&basis, &[0, 1]).unwrap();
        if twice.matrix().max_abs_diff(once.matrix()) <= 1e-10
            && once.entropy() >= rho.entropy() - 1e-10
        {
            deph_ok += 1;
        }
    }

    let ok = recon_ok == 1000 && rel_ok == 500 && mi_ok == 500 && deph_ok == 500;
    assert!(verdict(
        ok,
        "numerical kernels",
        &format!(
            "eigh reconstruction {recon_ok}/1000 (worst {worst_recon:.2e}, cap 1e-8); \
             relative entropy nonnegative {rel_ok}/500; mutual-information identity {mi_ok}/500 \
             (worst {worst_mi:.2e}, cap 1e-8); dephasing idempotent+monotone {deph_ok}/500"
        ),
    ));
}

/// Candidate measurement frames for one qubit on a 0.02 rad grid.
/// A frame's columns are u0 = (cos t, sin t e^{i f}), u1 = (-sin t e^{-i f},
/// cos t); the stored reduction (w0 = cos^2 t, x = cos t sin t e^{i f})
/// is all the pinching probabilities need. Azimuths cover [0, pi): the pair
/// {u0, u1} for (t, f + pi) equals the pair for (pi/2 - t, f) with columns
/// swapped, and pinched-probability entropy does not depend on column order.
fn qubit_grid_frames() -> Vec<(f64, f64, f64, [Complex64; 2], [Complex64; 2])> {
    const STEP: f64 = 0.02;
    let mut frames = Vec::new();
    let mut theta = 0.0f64;
    while theta <= std::f64::consts::FRAC_PI_2 + 1e-12 {
        let (s, c) = theta.sin_cos();
        let mut phi = 0.0f64;
        while phi < std::f64::consts::PI {
            let e = Complex64::from_polar(1.0, phi);
            let u0 = [Complex64::new(c, 0.0), s * e];
            let u1 = [-s * e.conj(), Complex64::new(c, 0.0)];
            let x = c * s * e;
            frames.push((c * c, x.re, x.im, u0, u1));
            phi += STEP;
        }
        theta += STEP;
    }
    frames
}

/// Minimum pinched-probability entropy (bits) of a two-qubit state over
/// the product-basis grid: exhaustive over all frame pairs.
fn grid_min_pinched_entropy(rho: &DensityMatrix) -> f64 {
    let frames = qubit_grid_frames();
    let m = rho.matrix();
    // rho_B[j,l] = sum_i rho[(i,j),(i,l)]; T1 = rho_B - T0 for any A-frame.
    let mut rho_b = [[Complex64::new(0.0, 0.0); 2]; 2];
    for j in 0..2 {
        for l in 0..2 {
            for i in 0..2 {
                rho_b[j][l] += m[(i * 2 + j, i * 2 + l)];
            }
        }
    }

    fn plogp(p: f64) -> f64 {
        if p > 1e-12 {
            -p * p.ln()
        } else {
            0.0
        }
    }

    let mins = qcoh::par::ordered_collect(frames.len(), |ia| {
        let (_, _, _, ua0, _) = &frames[ia];
        // T0[j,l] = sum_{i,k} conj(ua0[i]) rho[(i,j),(k,l)] ua0[k].
        let mut t0 = [[Complex64::new(0.0, 0.0); 2]; 2];
        for j in 0..2 {
            for l in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..2 {
                    for k in 0..2 {
                        acc += ua0[i].conj() * m[(i * 2 + j, k * 2 + l)] * ua0[k];
                    }
                }
                t0[j][l] = acc;
            }
        }
        let t1 = [
            [rho_b[0][0] - t0[0][0], rho_b[0][1] - t0[0][1]],
            [rho_b[1][0] - t0[1][0], rho_b[1][1] - t0[1][1]],
        ];
        let (d00, d01, c0r, c0i) = (t0[0][0].re, t0[1][1].re, t0[0][1].re, t0[0][1].im);
        let (d10, d11, c1r, c1i) = (t1[0][0].re, t1[1][1].re, t1[0][1].re, t1[0][1].im);
        let (tr0, tr1) = (d00 + d01, d10 + d11);

        let mut best = f64::INFINITY;
        for &(w0, xr, xi, _, _) in &frames {
            // p = u^dag T u for Hermitian T, reduced to real arithmetic.
            let p00 = d00 * w0 + d01 * (1.0 - w0) + 2.0 * (c0r * xr - c0i * xi);
            let p10 = d10 * w0 + d11 * (1.0 - w0) + 2.0 * (c1r * xr - c1i * xi);
            let h = plogp(p00) + plogp(tr0 - p00) + plogp(p10) + plogp(tr1 - p10);
            if h < best {
                best = h;
            }
        }
        best
    });
    mins.into_iter().fold(f64::INFINITY, f64::min) / std::f64::consts::LN_2
}

#[test]
fn basis_search_matches_brute_force_grid() {
    let spec = induced(&[2, 2], 3);
    let haar = EnsembleSpec {
        kind: EnsembleKind::HaarPure,
        dims: vec![2, 2],
        count: 1,
        seed: 9,
    };
    let states: Vec<(String, DensityMatrix)> = vec![
        ("plus_plus".into(), named_state(&NamedState::PlusPlus).unwrap()),
        ("bell".into(), named_state(&NamedState::Bell).unwrap()),
        ("datta".into(), named_state(&NamedState::Datta).unwrap()),
        ("werner_0.2".into(), named_state(&NamedState::Werner(0.2)).unwrap()),
        ("werner_0.5".into(), named_state(&NamedState::Werner(0.5)).unwrap()),
        ("werner_0.8".into(), named_state(&NamedState::Werner(0.8)).unwrap()),
        ("induced_0".into(), random_state(&spec, 0).unwrap()),
        ("induced_1".into(), random_state(&spec, 1).unwrap()),
        ("induced_2".into(), random_state(&spec, 2).unwrap()),
        ("haar_0".into(), random_state(&haar, 0).unwrap()),
    ];

    let config = default_config();
    let mut worst = (0.0f64, String::new());
    let mut all_ok = true;
    for (name, rho) in &states {
        let optimized = discord(rho, &config).unwrap().value;
        let grid = grid_min_pinched_entropy(rho) - rho.entropy();
        let delta = (optimized - grid).abs();
        if delta > worst.0 {
            worst = (delta, name.clone());
        }
        if delta > 1e-3 {
            all_ok = false;
        }
    }
    assert!(verdict(
        all_ok,
        "basis search vs 0.02 rad brute-force grid on 10 fixed states",
        &format!("max |optimizer - grid| = {:.2e} at {} (cap 1e-3)", worst.0, worst.1),
    ));
}
