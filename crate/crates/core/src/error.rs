use alloc::string::String;

/// Errors raised by state construction and the measure computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("subsystem {position} has dimension {dim}, expected at least 2")]
    InvalidDimension { position: usize, dim: usize },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("total dimension {requested} exceeds the configured cap of {cap}")]
    CapacityExceeded { requested: usize, cap: usize },

    #[error("unknown subsystem label {0}")]
    UnknownLabel(usize),

    #[error("duplicate subsystem label {0}")]
    DuplicateLabel(usize),

    #[error("subsystem subset must be nonempty")]
    EmptySubset,

    #[error("bipartition needs a nonempty proper subset")]
    DegenerateBipartition,

    #[error("matrix is not Hermitian (deviation {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("empty input")]
    EmptyInput,

    #[error("coefficients are inconsistent: reconstructed moment m_{index} = {value}")]
    CoefficientDomain { index: usize, value: f64 },

    #[error("characteristic polynomial has a complex root (imaginary part {imag})")]
    ComplexRoot { imag: f64 },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("need at least 2 subsystems, found {0}")]
    TooFewSubsystems(usize),

    #[error("ensemble has {weights} weights but {states} states")]
    EnsembleMismatch { weights: usize, states: usize },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("ensemble size {size} is smaller than the rank {rank} of the target state")]
    EnsembleTooSmall { size: usize, rank: usize },

    #[error("need moments up to order {needed}, found {found}")]
    InsufficientMoments { needed: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("LOCC invariant violated: {0}")]
    LoccInvariant(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
