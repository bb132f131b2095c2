use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} is not prime")]
    NotPrime(u64),
    #[error("dimension {0} must be an odd prime larger than 2")]
    EvenOrTooSmall(u64),
    #[error("{0} has no inverse modulo {1}")]
    ZeroDivisor(u64, usize),
    #[error("matrix is not Hermitian (max |A - A^dagger| = {violation:.3e})")]
    NotHermitian { violation: f64 },
    #[error("trace is not one (|Tr - 1| = {violation:.3e})")]
    TraceNotOne { violation: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("state vector is not normalized (|norm^2 - 1| = {violation:.3e})")]
    NotNormalized { violation: f64 },
    #[error("expected {expected} entries, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis construction invariant violated: {0}")]
    ConstructionInvariantViolated(String),
    #[error("Wigner value at (q={q}, p={p}) has imaginary part {imag:.3e}")]
    NonRealWignerValue { q: usize, p: usize, imag: f64 },
    #[error("converted grid is not real (max imaginary part {imag:.3e})")]
    NonRealResult { imag: f64 },
    #[error("invalid probe configuration: {0}")]
    InvalidProbeConfig(String),
    #[error("correlation records disagree on probe configuration")]
    MixedConfigs,
    #[error("extrapolation needs couplings eps1 and eps1/2, got {coarse} and {fine}")]
    CouplingRatio { coarse: f64, fine: f64 },
}
