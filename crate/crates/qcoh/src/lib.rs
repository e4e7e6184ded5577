//! Entropic coherence, discord, and dissonance measures for small
//! multipartite quantum states.
//!
//! The crate is organized around a validated [`state::DensityMatrix`] over a
//! list of subsystem dimensions. On top of it sit:
//!
//! * [`state`] — partial trace, dephasing in product bases, entropies,
//!   relative entropy, mutual information, and total correlation;
//! * [`basis`] — a Givens-angle parameterization of product bases and a
//!   deterministic multi-start coordinate search over them;
//! * [`measures`] — relative-entropy coherence and its split into quantum
//!   discord and dissonance, one-way (measured-subsystem) variants, and
//!   measurement-induced information-loss discord;
//! * [`ensembles`] — named reference states and seeded random-state streams;
//! * [`channels`] — Kraus channels, incoherence certification, and the
//!   coherence-distribution scenario for tripartite systems;
//! * [`verifier`] — inequality and identity checks for single states and
//!   ensembles, with machine-readable reports.
//!
//! All entropies are in bits. Randomness is fully determined by explicit
//! `u64` seeds; multi-start searches and ensemble sweeps run in parallel with
//! the `parallel` feature (on by default) without affecting results.

pub mod basis;
pub mod channels;
pub mod cmat;
pub mod eigh;
pub mod ensembles;
pub mod error;
pub mod io;
pub mod measures;
pub mod par;
pub mod report;
pub mod state;
pub mod verifier;

pub use error::{Error, Result};

/// Numerical tolerances used across the crate.
pub mod tol {
    /// Max allowed `|A - A^dag|` entry for validated states.
    pub const HERMITIAN: f64 = 1e-10;
    /// Max allowed `|Tr(rho) - 1|` for validated states.
    pub const TRACE: f64 = 1e-10;
    /// Eigenvalues below `-EIG_CLIP` fail validation; eigenvalues in
    /// `[-EIG_CLIP, 0)` are clipped to zero and the state renormalized.
    pub const EIG_CLIP: f64 = 1e-10;
    /// Weights at or below this never contribute to an entropy.
    pub const ENTROPY_CUTOFF: f64 = 1e-12;
    /// Support leakage above this makes a relative entropy infinite.
    pub const SUPPORT_OVERLAP: f64 = 1e-10;
    /// Max allowed `|U^dag U - I|` entry for basis and Kraus inputs.
    pub const UNITARY: f64 = 1e-10;
    /// Max allowed completeness residual for Kraus channels.
    pub const KRAUS: f64 = 1e-10;
    /// Inequality checks pass when `rhs - lhs >= -SLACK`.
    pub const SLACK: f64 = 1e-8;
    /// Algebraic identities must hold to this absolute tolerance.
    pub const IDENTITY: f64 = 1e-9;
    /// A reported witness basis must reproduce its measure value this well.
    pub const WITNESS: f64 = 1e-9;
}
