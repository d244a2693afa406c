use thiserror::Error;

/// Errors raised by the kernel, the model builders and the phase oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |M - M^H| = {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock cutoff {cutoff} too small (need at least {required})")]
    CutoffTooSmall { cutoff: usize, required: usize },

    #[error("sector with photon number {n} needs n+1 < cutoff {cutoff}")]
    SectorOutOfRange { n: usize, cutoff: usize },

    #[error("degenerate {sector} sector at n={n}: coupling and detuning both vanish")]
    DegenerateSector { sector: &'static str, n: usize },

    #[error("tracked level lost at phi={phi:.6} (overlap {overlap:.3e}, gap {gap:.3e})")]
    GapCollapse { phi: f64, overlap: f64, gap: f64 },

    #[error("loop is not closed: max |H(2pi) - H(0)| = {deviation:e}")]
    NonClosedLoop { deviation: f64 },

    #[error("per-step phase {phase:.4} at phi={phi:.6} exceeds pi/2; increase the step count")]
    StepTooCoarse { phi: f64, phase: f64 },

    #[error("reduced-state spectrum changes rank or crosses at phi={phi:.6}")]
    RankChange { phi: f64 },

    #[error("invalid loop: {0}")]
    InvalidLoop(String),
}

impl Error {
    /// Stable identifier used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::NonHermitianInput { .. } => "NonHermitianInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidDensityMatrix(_) => "InvalidDensityMatrix",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::CutoffTooSmall { .. } => "CutoffTooSmall",
            Error::SectorOutOfRange { .. } => "SectorOutOfRange",
            Error::DegenerateSector { .. } => "DegenerateSector",
            Error::GapCollapse { .. } => "GapCollapse",
            Error::NonClosedLoop { .. } => "NonClosedLoop",
            Error::StepTooCoarse { .. } => "StepTooCoarse",
            Error::RankChange { .. } => "RankChange",
            Error::InvalidLoop(_) => "InvalidLoop",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
