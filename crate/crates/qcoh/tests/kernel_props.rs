//! Property-based tests of the numerical kernels: entropy, eigensolver,
//! partial trace, and dephasing invariants over randomized inputs.

use num_complex::Complex64;
use proptest::prelude::*;
use qcoh::cmat::CMatrix;
use qcoh::eigh::eigh;
use qcoh::state::{shannon_entropy, DensityMatrix, ProductBasis};

fn hermitian_from(values: &[f64], side: usize) -> CMatrix {
    // Fill a Hermitian matrix from a flat real parameter list: diagonal
    // entries and independent (re, im) pairs above it.
    let mut m = CMatrix::zeros(side, side);
    let mut it = values.iter().copied().cycle();
    for i in 0..side {
        m[(i, i)] = Complex64::new(it.next().unwrap(), 0.0);
        for j in i + 1..side {
            let z = Complex64::new(it.next().unwrap(), it.next().unwrap());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn density_from(values: &[f64], dims: &[usize]) -> DensityMatrix {
    // Gram matrix of a parameterized square factor, normalized to trace 1.
    let side: usize = dims.iter().product();
    let mut g = CMatrix::zeros(side, side);
    let mut it = values.iter().copied().cycle();
    for i in 0..side {
        for j in 0..side {
            g[(i, j)] = Complex64::new(it.next().unwrap(), it.next().unwrap());
        }
    }
    let mut m = g.matmul(&g.adjoint());
    let tr = m.trace().re.max(1e-6);
    m = m.scale_re(1.0 / tr);
    DensityMatrix::validate(dims, m).expect("normalized Gram matrix is a state")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_lies_between_zero_and_log_dim(probs in prop::collection::vec(1e-6f64..1.0, 1..9)) {
        let total: f64 = probs.iter().sum();
        let normalized: Vec<f64> = probs.iter().map(|p| p / total).collect();
        let h = shannon_entropy(&normalized);
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= (normalized.len() as f64).log2() + 1e-9);
    }

    #[test]
    fn entropy_is_permutation_invariant(probs in prop::collection::vec(1e-6f64..1.0, 2..8)) {
        let total: f64 = probs.iter().sum();
        let mut normalized: Vec<f64> = probs.iter().map(|p| p / total).collect();
        let h = shannon_entropy(&normalized);
        normalized.reverse();
        prop_assert!((shannon_entropy(&normalized) - h).abs() < 1e-12);
    }

    #[test]
    fn eigh_reconstructs_and_preserves_trace(
        values in prop::collection::vec(-3.0f64..3.0, 16),
        side in 2usize..6,
    ) {
        let a = hermitian_from(&values, side);
        let spectrum = eigh(&a).unwrap();
        prop_assert!(spectrum.reconstruct().max_abs_diff(&a) < 1e-9);
        let eig_sum: f64 = spectrum.eigenvalues.iter().sum();
        prop_assert!((eig_sum - a.trace().re).abs() < 1e-9);
        // Descending order.
        for w in spectrum.eigenvalues.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-12);
        }
    }

    #[test]
    fn partial_trace_recovers_tensor_factors(
        va in prop::collection::vec(-1.0f64..1.0, 8),
        vb in prop::collection::vec(-1.0f64..1.0, 18),
    ) {
        let a = density_from(&va, &[2]);
        let b = density_from(&vb, &[3]);
        let joint = a.tensor(&b);
        let back_a = joint.partial_trace(&[0]).unwrap();
        let back_b = joint.partial_trace(&[1]).unwrap();
        prop_assert!(back_a.matrix().max_abs_diff(a.matrix()) < 1e-12);
        prop_assert!(back_b.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn dephasing_in_any_product_basis_is_idempotent_and_entropy_increasing(
        values in prop::collection::vec(-1.0f64..1.0, 32),
        seed in 0u64..1000,
    ) {
        let rho = density_from(&values, &[2, 2]);
        let basis = qcoh::basis::haar_random_basis(&[2, 2], seed);
        let once = rho.dephase(&basis, &[0, 1]).unwrap();
        let twice = once.dephase(&basis, &[0, 1]).unwrap();
        prop_assert!(twice.matrix().max_abs_diff(once.matrix()) < 1e-10);
        prop_assert!(once.entropy() >= rho.entropy() - 1e-10);
    }

    #[test]
    fn diagonal_states_are_dephasing_fixed_points(
        probs in prop::collection::vec(1e-3f64..1.0, 4),
    ) {
        let total: f64 = probs.iter().sum();
        let diag: Vec<Complex64> = probs
            .iter()
            .map(|p| Complex64::new(p / total, 0.0))
            .collect();
        let rho = DensityMatrix::validate(&[2, 2], CMatrix::diag(&diag)).unwrap();
        let basis = ProductBasis::computational(&[2, 2]);
        let dephased = rho.dephase(&basis, &[0, 1]).unwrap();
        prop_assert!(dephased.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        prop_assert!((dephased.entropy() - rho.entropy()).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_is_nonnegative_and_zero_on_self(
        va in prop::collection::vec(-1.0f64..1.0, 32),
        vb in prop::collection::vec(-1.0f64..1.0, 32),
    ) {
        let rho = density_from(&va, &[2, 2]);
        let sigma = density_from(&vb, &[2, 2]);
        let d = rho.relative_entropy(&sigma).unwrap();
        prop_assert!(d >= -1e-9);
        let self_d = rho.relative_entropy(&rho).unwrap();
        prop_assert!(self_d.abs() < 1e-8);
    }
}
