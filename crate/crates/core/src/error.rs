use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A matrix that must be hermitian or symmetric is not, beyond tolerance.
    #[error("symmetry violation in {what}: residual {residual:e}")]
    SymmetryViolation { what: &'static str, residual: f64 },

    #[error("non-physical value {value:e} (tolerance {tol:e})")]
    NonPhysical { value: f64, tol: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("wrong spectrum kind: expected {expected}, got {got}")]
    WrongKind {
        expected: &'static str,
        got: &'static str,
    },

    #[error("regions overlap at site {0}")]
    Overlap(usize),

    #[error("unsupported matrix norm order {0}")]
    UnsupportedNorm(String),

    /// The quadratic form is not positive definite, or the spectrum is gapless.
    #[error("unstable hamiltonian: {0}")]
    Unstable(String),

    #[error("local energies are not all equal (spread {0:e})")]
    UnequalLocalEnergies(f64),

    #[error("coupling too strong for perturbation theory: |delta|/lambda = {0}")]
    CouplingTooStrong(f64),

    #[error("no critical point on the search bracket")]
    NoCriticalPoint,

    #[error("out of bounds: {0}")]
    OutOfBounds(String),

    #[error("state is not weakly correlated: max local f = {max_f} exceeds gate {gate}")]
    NotWeaklyCorrelated { max_f: f64, gate: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("estimated memory {need} bytes exceeds cap {cap} bytes")]
    MemoryCap { need: u64, cap: u64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
