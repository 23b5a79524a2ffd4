//! Induction machine: parameters, derived coefficients and αβ-frame dynamics.
//!
//! State is `(𝓘_s, Ψ_r, ω_e, T_r)`: stator currents, rotor fluxes, electrical
//! rotor speed and resistant torque (carried as a state with `Ṫ_r = 0`).
//! All angles and speeds are electrical.

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2, Vec6};
use crate::num::Real;

/// Induction machine constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImParams<T> {
    /// Stator resistance R_s (Ω).
    pub r_s: T,
    /// Rotor resistance R_r (Ω).
    pub r_r: T,
    /// Stator inductance L_s (H).
    pub l_s: T,
    /// Rotor inductance L_r (H).
    pub l_r: T,
    /// Mutual inductance M (H).
    pub m: T,
    /// Pole-pair count.
    pub pole_pairs: u32,
    /// Rotor plus load inertia J (kg·m²).
    pub inertia: T,
}

impl<T: Real> ImParams<T> {
    /// Desk-scale default parameter set.
    pub fn desk_default() -> Self {
        Self {
            r_s: T::of(1.2),
            r_r: T::of(1.0),
            l_s: T::of(0.12),
            l_r: T::of(0.12),
            m: T::of(0.11),
            pole_pairs: 2,
            inertia: T::of(0.01),
        }
    }

    /// Leakage coefficient σ = 1 − M²/(L_s·L_r).
    pub fn sigma(&self) -> T {
        T::one() - self.m * self.m / (self.l_s * self.l_r)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            (self.r_s, "r_s"),
            (self.r_r, "r_r"),
            (self.l_s, "l_s"),
            (self.l_r, "l_r"),
            (self.m, "m"),
            (self.inertia, "inertia"),
        ];
        for (v, name) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        for (v, name) in &fields {
            if *name != "m" && *v <= T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        let sigma = self.sigma();
        if sigma <= T::zero() || sigma >= T::one() {
            return Err(Error::InvalidParameter(format!(
                "sigma = {sigma} outside (0, 1); need 0 < M^2 < L_s*L_r"
            )));
        }
        if self.m <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "m must be strictly positive, got {}",
                self.m
            )));
        }
        if self.pole_pairs == 0 {
            return Err(Error::InvalidParameter("pole_pairs must be >= 1".into()));
        }
        Ok(())
    }
}

/// Coefficients derived from [`ImParams`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImDerived<T> {
    /// Equivalent resistance r_s = R_s + R_r·M²/L_r² (Ω).
    pub r_s: T,
    /// Leakage coefficient σ.
    pub sigma: T,
    /// Rotor time constant τ_r = L_r/R_r (s).
    pub tau_r: T,
    /// a = −r_s/(σL_s) (1/s).
    pub a: T,
    /// b = −R_s/(σL_s) (1/s).
    pub b: T,
    /// c = 3p²/(2σL_s).
    pub c: T,
}

impl<T: Real> ImDerived<T> {
    /// Compute the coefficients without re-validating the parameters.
    pub(crate) fn new_unchecked(p: &ImParams<T>) -> Self {
        let sigma = p.sigma();
        let sls = sigma * p.l_s;
        let r_s = p.r_s + p.r_r * p.m * p.m / (p.l_r * p.l_r);
        let pp = T::from_u32(p.pole_pairs).expect("pole pair count fits scalar");
        Self {
            r_s,
            sigma,
            tau_r: p.l_r / p.r_r,
            a: -r_s / sls,
            b: -p.r_s / sls,
            c: T::of(1.5) * pp * pp / sls,
        }
    }
}

/// Derived coefficients, rejecting parameter sets that violate the invariants.
pub fn im_derived<T: Real>(params: &ImParams<T>) -> Result<ImDerived<T>> {
    params.validate()?;
    Ok(ImDerived::new_unchecked(params))
}

/// Induction machine state in the stationary αβ frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImState<T> {
    /// Stator currents (i_sα, i_sβ) (A).
    pub i_s: Vec2<T>,
    /// Rotor fluxes (ψ_rα, ψ_rβ) (Wb).
    pub psi_r: Vec2<T>,
    /// Electrical rotor speed ω_e (rad/s).
    pub omega_e: T,
    /// Resistant torque T_r (N·m).
    pub t_r: T,
}

impl<T: Real> ImState<T> {
    pub fn zero() -> Self {
        Self {
            i_s: Vec2::zeros(),
            psi_r: Vec2::zeros(),
            omega_e: T::zero(),
            t_r: T::zero(),
        }
    }

    pub fn to_vec(&self) -> Vec6<T> {
        Vec6::from([
            self.i_s[0],
            self.i_s[1],
            self.psi_r[0],
            self.psi_r[1],
            self.omega_e,
            self.t_r,
        ])
    }

    pub fn from_vec(v: &Vec6<T>) -> Self {
        Self {
            i_s: Vec2::new(v[0], v[1]),
            psi_r: Vec2::new(v[2], v[3]),
            omega_e: v[4],
            t_r: v[5],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_vec().is_finite()
    }
}

/// Flux-coupling matrix γ(ω_e) = (1/τ_r)·𝕀₂ − ω_e·𝕁₂.
pub(crate) fn gamma_mat<T: Real>(tau_r: T, omega_e: T) -> Mat2<T> {
    let inv_tau = tau_r.recip();
    Mat2::from_rows([[inv_tau, omega_e], [-omega_e, inv_tau]])
}

/// Continuous-time dynamics ẋ = f(x, 𝒱_s) of the induction machine.
pub fn im_dynamics<T: Real>(x: &ImState<T>, v_s: Vec2<T>, params: &ImParams<T>) -> ImState<T> {
    let d = ImDerived::new_unchecked(params);
    im_dynamics_with(x, v_s, params, &d)
}

/// Same as [`im_dynamics`] with precomputed derived coefficients.
pub fn im_dynamics_with<T: Real>(
    x: &ImState<T>,
    v_s: Vec2<T>,
    params: &ImParams<T>,
    d: &ImDerived<T>,
) -> ImState<T> {
    let gamma = gamma_mat(d.tau_r, x.omega_e);
    let m_over_lr = params.m / params.l_r;
    let inv_sls = (d.sigma * params.l_s).recip();

    let di_s = (v_s - x.i_s.scale(d.r_s) + gamma.mul_vec(&x.psi_r).scale(m_over_lr)).scale(inv_sls);
    let dpsi_r = -gamma.mul_vec(&x.psi_r) + x.i_s.scale(params.m / d.tau_r);

    // ω̇_e = (3/2)(p²/J)(M/L_r)·𝓘_sᵀ𝕁₂Ψ_r − (p/J)·T_r
    let pp = T::from_u32(params.pole_pairs).expect("pole pair count fits scalar");
    let torque_coupling = x.psi_r.cross(&x.i_s); // 𝓘ᵀ𝕁₂Ψ = ψ_α i_β − ψ_β i_α
    let domega = T::of(1.5) * pp * pp / params.inertia * m_over_lr * torque_coupling
        - pp / params.inertia * x.t_r;

    ImState {
        i_s: di_s,
        psi_r: dpsi_r,
        omega_e: domega,
        t_r: T::zero(),
    }
}

/// Change of variables Ĩ_s = σL_s·𝓘_s, Ψ̃_r = (M/L_r)·Ψ_r; speed and torque
/// components unchanged.
pub fn im_scale<T: Real>(x: &ImState<T>, params: &ImParams<T>) -> ImState<T> {
    let sigma = params.sigma();
    ImState {
        i_s: x.i_s.scale(sigma * params.l_s),
        psi_r: x.psi_r.scale(params.m / params.l_r),
        omega_e: x.omega_e,
        t_r: x.t_r,
    }
}

/// Inverse of [`im_scale`].
pub fn im_unscale<T: Real>(x: &ImState<T>, params: &ImParams<T>) -> ImState<T> {
    let sigma = params.sigma();
    ImState {
        i_s: x.i_s.scale((sigma * params.l_s).recip()),
        psi_r: x.psi_r.scale(params.l_r / params.m),
        omega_e: x.omega_e,
        t_r: x.t_r,
    }
}
