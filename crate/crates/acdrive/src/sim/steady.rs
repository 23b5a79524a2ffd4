//! Periodic steady-state hint for sinusoidally excited induction machines.
//!
//! With the rotor speed frozen, the electrical subsystem (currents and
//! fluxes) is linear; embedding the αβ pairs as complex numbers (αβ ↔
//! re/im, 𝕁₂ ↔ j) turns the periodic balance into one complex division.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Vec2;
use crate::models::{ImDerived, ImState};
use crate::num::Real;
use crate::sim::{ExcitationKind, MachineSpec, Scenario};

/// Electrical steady state of the IM scenario at its initial speed.
///
/// Requires an IM machine with `sinusoid` or `dc` excitation; the phasor
/// balance of the current/flux equations is solved at ω_s = 2πf with the
/// scenario's initial ω_e and T_r carried through unchanged.
pub fn steady_state_hint<T: Real>(scenario: &Scenario<T>) -> Result<ImState<T>> {
    let MachineSpec::Im { params, x0 } = &scenario.machine else {
        return Err(Error::Mismatch("steady_state_hint requires an IM machine".into()));
    };
    params.validate()?;
    let profile = &scenario.excitation;
    let omega_s = match profile.kind {
        ExcitationKind::Sinusoid => T::two_pi() * profile.frequency,
        ExcitationKind::Dc => T::zero(),
        _ => {
            return Err(Error::Mismatch(
                "steady_state_hint requires sinusoid or dc excitation".into(),
            ))
        }
    };
    let d = ImDerived::new_unchecked(params);

    // phasors: V̂ = A·e^{jφ}; γ_c = 1/τ_r − jω_e
    let (sin_phase, cos_phase) = profile.phase.sin_cos();
    let v_hat = Complex::new(profile.amplitude * cos_phase, profile.amplitude * sin_phase);
    let gamma_c = Complex::new(d.tau_r.recip(), -x0.omega_e);
    let j_omega_s = Complex::new(T::zero(), omega_s);

    // flux balance: Ψ̂ = (M/τ_r)·Î / (jω_s + γ_c); the real part of the
    // denominator is 1/τ_r > 0, so it never vanishes.
    let flux_denom = j_omega_s + gamma_c;

    // current balance: Z·Î = V̂ with
    // Z = jω_s·σL_s + r_s − (M²/(L_r·τ_r))·γ_c/(jω_s + γ_c)
    let sls = d.sigma * params.l_s;
    let m2_lr_tau = params.m * params.m / (params.l_r * d.tau_r);
    let z = j_omega_s * Complex::new(sls, T::zero()) + Complex::new(d.r_s, T::zero())
        - gamma_c / flux_denom * Complex::new(m2_lr_tau, T::zero());

    let z_floor = T::of(1e-12) * (d.r_s + sls * omega_s.abs()).max(T::one());
    if z.norm() <= z_floor {
        return Err(Error::SingularPhasor {
            impedance: z.norm().to_f64().unwrap_or(0.0),
        });
    }

    let i_hat = v_hat / z;
    let psi_hat = i_hat * Complex::new(params.m / d.tau_r, T::zero()) / flux_denom;

    Ok(ImState {
        i_s: Vec2::new(i_hat.re, i_hat.im),
        psi_r: Vec2::new(psi_hat.re, psi_hat.im),
        omega_e: x0.omega_e,
        t_r: x0.t_r,
    })
}
