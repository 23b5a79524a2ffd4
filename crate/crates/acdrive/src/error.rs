//! Crate-wide error type.

/// Errors raised by model validation, simulation and analysis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A machine parameter set violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The inductance matrix is numerically singular (nonphysical parameters).
    #[error("singular inductance matrix: |det| = {det:e} at or below guard {guard:e}")]
    SingularInductance { det: f64, guard: f64 },

    /// The phasor balance of the steady-state solve has no solution.
    #[error("singular phasor system: |Z| = {impedance:e}")]
    SingularPhasor { impedance: f64 },

    /// A state component left the admissible region during integration.
    #[error("trajectory diverged at t = {t}: max |state| = {magnitude:e}")]
    Divergence { t: f64, magnitude: f64 },

    /// An angle-based quantity is undefined because its vector is ~zero.
    #[error("undefined angle: vector norm {norm:e} below threshold")]
    UndefinedAngle { norm: f64 },

    /// A scenario/trajectory pair is inconsistent (wrong machine, bad index).
    #[error("mismatched input: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
