//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty support: wave function has no samples")]
    EmptySupport,
    #[error("mismatched lengths: {0} samples but {1} amplitudes")]
    MismatchedLengths(usize, usize),
    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
    #[error("non-finite amplitude at sample {0}")]
    NonFiniteAmplitude(usize),
    #[error("incompatible supports: {0}")]
    IncompatibleSupports(String),
    #[error("non-normalizable: {0}")]
    NonNormalizable(String),
    #[error("zero state: norm vanishes")]
    ZeroState,
    #[error("invalid beam spec: {0}")]
    InvalidBeamSpec(String),
    #[error("evanescent: no real transverse wave number (omega < c|qz|)")]
    EvanescentBeam,
    #[error("gauge singular on k_z axis (sin theta = {0:.3e})")]
    AxisSingular(f64),
    #[error("manifold lacks required derivative directions: {0}")]
    ManifoldLacksDerivatives(String),
    #[error("support not closable under inversion k -> -k")]
    SupportNotClosed,
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("undersampled grid: spacing {spacing:.6e} exceeds pi/k_max = {limit:.6e} on axis {axis}")]
    NyquistViolation { axis: usize, spacing: f64, limit: f64 },
    #[error("zero total energy")]
    ZeroEnergy,
    #[error("LP undefined for static component (zero-mode fraction {0:.3e})")]
    LpStaticComponent(f64),
    #[error("invalid medium: {0}")]
    InvalidMedium(String),
    #[error("CFL violation: dt = {dt:.6e} exceeds limit {limit:.6e}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("NaN detected at step {step} (t = {time:.6e})")]
    NanDetected { step: usize, time: f64 },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("invalid field data: {0}")]
    InvalidField(String),
}

pub type Result<T> = std::result::Result<T, Error>;
