use thiserror::Error;

/// Errors produced by state validation, linear-algebra kernels, basis
/// searches, and the verification layer.
#[derive(Error, Debug)]
pub enum Error {
    /// Input matrix differs from its conjugate transpose beyond tolerance.
    #[error("matrix is not Hermitian (max |A - A^dag| entry = {residual:.3e})")]
    NotHermitian { residual: f64 },

    /// Input matrix has an eigenvalue below the PSD floor.
    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    /// Input matrix trace differs from one beyond tolerance.
    #[error("trace must be 1, got {trace:.12}")]
    BadTrace { trace: f64 },

    /// Shapes or subsystem dimension lists are inconsistent.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// `partial_trace` was asked to keep no subsystems.
    #[error("keep set must name at least one subsystem")]
    EmptyKeepSet,

    /// A subsystem index is outside `0..n_subsystems`.
    #[error("subsystem index {index} out of range for {n_subsystems} subsystems")]
    IndexOutOfRange { index: usize, n_subsystems: usize },

    /// The eigensolver did not reach its off-diagonal target within the
    /// sweep budget.
    #[error("eigensolver failed to converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    /// A bipartition of the subsystems is empty, full, or repeats indices.
    #[error("bad partition: {0}")]
    BadPartition(String),

    /// A dephasing subset was empty.
    #[error("subset of subsystems must be non-empty")]
    EmptySubset,

    /// A basis parameterization carries the wrong number of angles for its
    /// subsystem dimensions.
    #[error("subsystem {subsystem} of dimension {dim} needs {expected} angles, got {got}")]
    BadAngleCount {
        subsystem: usize,
        dim: usize,
        expected: usize,
        got: usize,
    },

    /// A measured/reference subset is empty, repeats indices, or is not a
    /// proper subset where one is required.
    #[error("bad subset: {0}")]
    BadSubset(String),

    /// An unrecognized named state.
    #[error("unknown state name `{0}`")]
    UnknownName(String),

    /// A named-state parameter is outside its valid range.
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// An unrecognized theorem identifier passed to the verifier.
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    /// A local basis matrix fails the unitarity check.
    #[error("local basis for subsystem {subsystem} is not unitary (residual {residual:.3e})")]
    NotUnitary { subsystem: usize, residual: f64 },

    /// Kraus operators do not sum to the identity.
    #[error("Kraus operators are not trace preserving (completeness residual {residual:.3e})")]
    KrausIncomplete { residual: f64 },

    /// A Kraus operator maps some basis state to a superposition, so the
    /// channel can create coherence.
    #[error("Kraus operator {operator} has more than one non-zero entry in column {column}")]
    NotIncoherent { operator: usize, column: usize },

    /// Malformed JSON input for a state or channel.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
