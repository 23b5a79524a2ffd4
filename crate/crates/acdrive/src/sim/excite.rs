//! Excitation signal generation with exact analytic time derivatives.
//!
//! The stator channels form a two-phase vector `amplitude·(cosΦ, sinΦ)`
//! rotating at the instantaneous angular frequency Φ̇; the third channel is
//! the field voltage for wound-rotor machines. Derivatives are closed-form:
//! the output-derivative analysis needs d𝒱/dt exactly, and differencing the
//! input numerically would pollute the finite-difference oracle.

use crate::error::{Error, Result};
use crate::linalg::{Vec2, Vec3};
use crate::num::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExcitationKind {
    /// Identically zero.
    Zero,
    /// Constant vector `amplitude·(cos phase, sin phase)`.
    Dc,
    /// Fixed-frequency rotating vector.
    Sinusoid,
    /// Sinusoid with a linear amplitude ramp-up (soft start): the amplitude
    /// scales by `min(1, t·frequency_rate)` with `frequency_rate` acting as
    /// the ramp slope in 1/s.
    RampedSinusoid,
    /// Linear frequency sweep: instantaneous frequency
    /// `frequency + frequency_rate·t` (Hz).
    Chirp,
}

/// Field-winding voltage: a DC level plus an optional sinusoidal component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldExcitation<T> {
    /// DC level (V).
    pub voltage: T,
    /// Sinusoidal amplitude (V); 0 for pure DC.
    pub amplitude: T,
    /// Sinusoidal frequency (Hz).
    pub frequency: T,
}

impl<T: Real> Default for FieldExcitation<T> {
    fn default() -> Self {
        Self {
            voltage: T::zero(),
            amplitude: T::zero(),
            frequency: T::zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcitationProfile<T> {
    pub kind: ExcitationKind,
    /// Stator voltage amplitude (V).
    pub amplitude: T,
    /// Stator frequency (Hz); initial frequency for chirps.
    pub frequency: T,
    /// Frequency sweep rate (Hz/s) for chirps; ramp slope (1/s) for
    /// ramped sinusoids.
    pub frequency_rate: T,
    /// Initial phase (rad).
    pub phase: T,
    /// Field-winding channel (wound-rotor machines only).
    pub field: FieldExcitation<T>,
}

impl<T: Real> ExcitationProfile<T> {
    pub fn zero() -> Self {
        Self {
            kind: ExcitationKind::Zero,
            amplitude: T::zero(),
            frequency: T::zero(),
            frequency_rate: T::zero(),
            phase: T::zero(),
            field: FieldExcitation::default(),
        }
    }

    pub fn sinusoid(amplitude: T, frequency: T, phase: T) -> Self {
        Self {
            kind: ExcitationKind::Sinusoid,
            amplitude,
            frequency,
            phase,
            ..Self::zero()
        }
    }

    pub fn dc(amplitude: T, phase: T) -> Self {
        Self {
            kind: ExcitationKind::Dc,
            amplitude,
            phase,
            ..Self::zero()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.amplitude.is_finite() || self.amplitude < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "excitation amplitude must be finite and >= 0, got {}",
                self.amplitude
            )));
        }
        if !self.frequency.is_finite() || self.frequency < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "excitation frequency must be finite and >= 0, got {}",
                self.frequency
            )));
        }
        if !self.frequency_rate.is_finite() || !self.phase.is_finite() {
            return Err(Error::InvalidParameter(
                "excitation frequency_rate and phase must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Evaluate the excitation and its exact time derivative at time `t`.
///
/// Channels 1–2 are the stator αβ pair, channel 3 the field voltage.
pub fn excite<T: Real>(profile: &ExcitationProfile<T>, t: T) -> (Vec3<T>, Vec3<T>) {
    let (u, du) = stator_signal(profile, t);
    let (uf, duf) = field_signal(&profile.field, t);
    (
        Vec3::new(u[0], u[1], uf),
        Vec3::new(du[0], du[1], duf),
    )
}

fn stator_signal<T: Real>(p: &ExcitationProfile<T>, t: T) -> (Vec2<T>, Vec2<T>) {
    let tau = T::two_pi();
    match p.kind {
        ExcitationKind::Zero => (Vec2::zeros(), Vec2::zeros()),
        ExcitationKind::Dc => {
            let (s, c) = p.phase.sin_cos();
            (Vec2::new(p.amplitude * c, p.amplitude * s), Vec2::zeros())
        }
        ExcitationKind::Sinusoid => {
            let phi = tau * p.frequency * t + p.phase;
            let rate = tau * p.frequency;
            let (s, c) = phi.sin_cos();
            (
                Vec2::new(p.amplitude * c, p.amplitude * s),
                Vec2::new(-p.amplitude * rate * s, p.amplitude * rate * c),
            )
        }
        ExcitationKind::RampedSinusoid => {
            let phi = tau * p.frequency * t + p.phase;
            let rate = tau * p.frequency;
            let (s, c) = phi.sin_cos();
            let ramp = (t * p.frequency_rate).min(T::one()).max(T::zero());
            let ramp_dot = if t * p.frequency_rate < T::one() && t >= T::zero() {
                p.frequency_rate
            } else {
                T::zero()
            };
            let a = p.amplitude;
            (
                Vec2::new(a * ramp * c, a * ramp * s),
                Vec2::new(
                    a * (ramp_dot * c - ramp * rate * s),
                    a * (ramp_dot * s + ramp * rate * c),
                ),
            )
        }
        ExcitationKind::Chirp => {
            let half = T::of(0.5);
            let phi = tau * (p.frequency * t + half * p.frequency_rate * t * t) + p.phase;
            let rate = tau * (p.frequency + p.frequency_rate * t);
            let (s, c) = phi.sin_cos();
            (
                Vec2::new(p.amplitude * c, p.amplitude * s),
                Vec2::new(-p.amplitude * rate * s, p.amplitude * rate * c),
            )
        }
    }
}

fn field_signal<T: Real>(f: &FieldExcitation<T>, t: T) -> (T, T) {
    if f.amplitude == T::zero() {
        return (f.voltage, T::zero());
    }
    let rate = T::two_pi() * f.frequency;
    let (s, c) = (rate * t).sin_cos();
    (f.voltage + f.amplitude * s, f.amplitude * rate * c)
}
