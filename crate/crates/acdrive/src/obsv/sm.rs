//! SM observability: the 6×5 first-order matrix, the closed-form
//! determinants of all five variants, the observability vector and the
//! standstill margin `ω vs dθ_O/dt`.

use crate::error::{Error, Result};
use crate::linalg::{Mat5, Mat6x5, Vec3};
use crate::models::{
    invert_inductance, invert_stator, park, sm_current_dynamics, sm_inductance, stator_blocks,
    SmParams, SmState, SmVariant,
};
use crate::num::Real;
use crate::sim::Trajectory;

/// The stacked Jacobians of `(y, ẏ)` with `y = 𝓘`: a 6×5 matrix over the
/// state order `(i_α, i_β, i_f, ω, θ)`, plus the square submatrix of its
/// first five rows whose determinant carries the observability condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmObservability<T> {
    pub full: Mat6x5<T>,
    pub first_five: Mat5<T>,
}

/// Assemble the first-order observability matrix at `(x, u)`.
///
/// The ω-column is `−𝔏⁻¹𝔏′𝓘` and the θ-column is `∂𝓘̇/∂θ` from the chain
/// rule on the closed-form current derivative,
/// `∂𝓘̇/∂θ = −𝔏⁻¹𝔏′𝓘̇ − ω𝔏⁻¹𝔏″𝓘`. PMSM/SyRM rows come from the pinned
/// stator system (their field row is identically zero).
pub fn sm_obsv_matrix<T: Real>(
    x: &SmState<T>,
    u: Vec3<T>,
    params: &SmParams<T>,
) -> Result<SmObservability<T>> {
    let mut full = Mat6x5::zeros();
    for k in 0..3 {
        full[(k, k)] = T::one();
    }

    if params.variant.has_field_winding() {
        let (l, lp, lpp) = sm_inductance(x.theta, params)?;
        let l_inv = invert_inductance(&l)?;
        let i_dot = sm_current_dynamics(x, u, params)?;

        // −𝔏⁻¹(ℜ + 𝔏′ω)
        let mut r_eq = lp.scale(x.omega);
        r_eq[(0, 0)] += params.r_s;
        r_eq[(1, 1)] += params.r_s;
        r_eq[(2, 2)] += params.r_f;
        let di_di = -l_inv.mul_mat(&r_eq);

        let omega_col = -l_inv.mul_vec(&lp.mul_vec(&x.i));
        let theta_col =
            -l_inv.mul_vec(&lp.mul_vec(&i_dot)) - l_inv.mul_vec(&lpp.mul_vec(&x.i)).scale(x.omega);

        for r in 0..3 {
            for c in 0..3 {
                full[(3 + r, c)] = di_di[(r, c)];
            }
            full[(3 + r, 3)] = omega_col[r];
            full[(3 + r, 4)] = theta_col[r];
        }
    } else {
        let blocks = stator_blocks(x.theta, params);
        let lss_inv = invert_stator(&blocks.lss)?;
        let i_s = x.i.xy();
        let i_f = x.i[2];
        let di_s = sm_current_dynamics(x, u, params)?.xy();

        // −L_ss⁻¹(R_s𝕀₂ + ωL_ss′)
        let mut r_eq = blocks.lss_p.scale(x.omega);
        r_eq[(0, 0)] += params.r_s;
        r_eq[(1, 1)] += params.r_s;
        let di_di = -lss_inv.mul_mat(&r_eq);

        let if_col = -lss_inv.mul_vec(&blocks.m_p).scale(x.omega);
        let omega_col = -lss_inv.mul_vec(&(blocks.lss_p.mul_vec(&i_s) + blocks.m_p.scale(i_f)));
        let theta_col = -lss_inv.mul_vec(&blocks.lss_p.mul_vec(&di_s))
            - lss_inv
                .mul_vec(&(blocks.lss_pp.mul_vec(&i_s) + blocks.m_pp.scale(i_f)))
                .scale(x.omega);

        for r in 0..2 {
            full[(3 + r, 0)] = di_di[(r, 0)];
            full[(3 + r, 1)] = di_di[(r, 1)];
            full[(3 + r, 2)] = if_col[r];
            full[(3 + r, 3)] = omega_col[r];
            full[(3 + r, 4)] = theta_col[r];
        }
        // row 6 (∂i̇_f/∂x) is identically zero for the pinned variants
    }

    let mut first_five = Mat5::zeros();
    for r in 0..5 {
        for c in 0..5 {
            first_five[(r, c)] = full[(r, c)];
        }
    }
    Ok(SmObservability { full, first_five })
}

/// Currents and their rates in the rotor dq frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DqRates<T> {
    pub i_d: T,
    pub i_q: T,
    pub di_d: T,
    pub di_q: T,
    pub di_f: T,
}

/// dq currents and rates at `(x, u)`; the rates include the frame-rotation
/// terms (`d/dt` of the Park transform at θ̇ = ω).
pub fn sm_dq_rates<T: Real>(x: &SmState<T>, u: Vec3<T>, params: &SmParams<T>) -> Result<DqRates<T>> {
    let i_dot = sm_current_dynamics(x, u, params)?;
    let i_dq = park(x.i.xy(), x.theta);
    let rotated = park(i_dot.xy(), x.theta);
    Ok(DqRates {
        i_d: i_dq[0],
        i_q: i_dq[1],
        di_d: rotated[0] + x.omega * i_dq[1],
        di_q: rotated[1] - x.omega * i_dq[0],
        di_f: i_dot[2],
    })
}

/// Closed-form determinant of the selected 5×5 submatrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmDelta<T> {
    /// The variant's printed formula.
    pub specialized: T,
    /// The general flux form with the variant's flux substitution.
    pub general: T,
    /// Sum of the absolute additive terms of the specialized formula;
    /// the natural scale against which "Δ is numerically zero" is judged.
    pub term_scale: T,
}

/// Evaluate the variant determinant and the general flux form at `(x, u)`.
pub fn sm_delta<T: Real>(x: &SmState<T>, u: Vec3<T>, params: &SmParams<T>) -> Result<SmDelta<T>> {
    let r = sm_dq_rates(x, u, params)?;
    let omega = x.omega;
    let i_f = x.i[2];
    let (l_d, l_q, l_del) = (params.l_d(), params.l_q(), params.l_delta());
    let (l_dd, l_ddel) = (params.l_dd(), params.l_ddelta());

    let (specialized, term_scale) = match params.variant {
        SmVariant::Wrsm => {
            let psi_od = l_del * r.i_d + params.m_f * i_f;
            let pre = (l_dd * l_q).recip();
            let t1 = pre * (psi_od * psi_od + l_ddel * l_del * r.i_q * r.i_q) * omega;
            let t2 = pre * l_ddel * ((l_del * r.di_d + params.m_f * r.di_f) * r.i_q - psi_od * r.di_q);
            (t1 + t2, t1.abs() + t2.abs())
        }
        SmVariant::NWrsm => {
            let pre = params.m_f * params.m_f / (l_dd * l_q);
            let t1 = pre * i_f * i_f * omega;
            let t2 = -pre * params.m_f / params.l_f * (r.i_q * r.di_f - i_f * r.di_q);
            (t1 + t2, t1.abs() + t2.abs())
        }
        SmVariant::Ipmsm => {
            let psi_od = l_del * r.i_d + params.psi_r;
            let pre = (l_d * l_q).recip();
            let t1 = pre * (psi_od * psi_od + l_del * l_del * r.i_q * r.i_q) * omega;
            let t2 = pre * l_del * (l_del * r.di_d * r.i_q - psi_od * r.di_q);
            (t1 + t2, t1.abs() + t2.abs())
        }
        SmVariant::Spmsm => {
            let t1 = params.psi_r * params.psi_r / (params.l0 * params.l0) * omega;
            (t1, t1.abs())
        }
        SmVariant::Syrm => {
            let pre = l_del * l_del / (l_d * l_q);
            let t1 = pre * (r.i_d * r.i_d + r.i_q * r.i_q) * omega;
            let t2 = pre * (r.di_d * r.i_q - r.i_d * r.di_q);
            (t1 + t2, t1.abs() + t2.abs())
        }
    };

    // general flux form, expanded so the (ψ_d − L_q i_d)² term carries no
    // 1/L_Δ (SPMSM has L_Δ = 0)
    let magnet = match params.variant {
        SmVariant::Wrsm | SmVariant::NWrsm => params.m_f * i_f,
        SmVariant::Ipmsm | SmVariant::Spmsm => params.psi_r,
        SmVariant::Syrm => T::zero(),
    };
    let magnet_rate = if params.variant.has_field_winding() {
        params.m_f * r.di_f
    } else {
        T::zero()
    };
    let psi_d = l_d * r.i_d + magnet;
    let psi_q = l_q * r.i_q;
    let dpsi_d = l_d * r.di_d + magnet_rate;
    let dpsi_q = l_q * r.di_q;
    let pre = (l_dd * l_q).recip();
    let general = pre * (psi_d - l_q * r.i_d) * (psi_d - l_q * r.i_d) * omega
        + pre
            * l_ddel
            * (l_del * r.i_q * r.i_q * omega + dpsi_d * r.i_q + dpsi_q * r.i_d
                - (r.di_d * psi_q + r.di_q * psi_d));

    Ok(SmDelta {
        specialized,
        general,
        term_scale,
    })
}

/// The observability vector `Ψ_O` in the dq frame and its phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservabilityVector<T> {
    /// Ψ_Od = L_δ·i_d + M_f·i_f (Wb).
    pub psi_od: T,
    /// Ψ_Oq = L_Δ·i_q (Wb).
    pub psi_oq: T,
    /// Phase θ_O = atan2(Ψ_Oq, Ψ_Od) in (−π, π].
    pub theta_o: T,
}

/// Observability vector at `x`; errors when both components are below 1e−12.
///
/// The PMSM substitution `M_f·i_f → ψ_r` is carried by the pinned field
/// current, so the SPMSM degenerates to the frozen vector `(ψ_r, 0)`.
pub fn sm_observability_vector<T: Real>(
    x: &SmState<T>,
    params: &SmParams<T>,
) -> Result<ObservabilityVector<T>> {
    let i_dq = park(x.i.xy(), x.theta);
    let psi_od = params.l_delta() * i_dq[0] + params.m_f * x.i[2];
    let psi_oq = params.l_ddelta() * i_dq[1];
    let floor = T::of(1e-12);
    if psi_od.abs() < floor && psi_oq.abs() < floor {
        return Err(Error::UndefinedAngle {
            norm: (psi_od * psi_od + psi_oq * psi_oq)
                .sqrt()
                .to_f64()
                .unwrap_or(0.0),
        });
    }
    Ok(ObservabilityVector {
        psi_od,
        psi_oq,
        theta_o: psi_oq.atan2(psi_od),
    })
}

/// Both sides of the SM standstill condition plus the approximation factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmMargin<T> {
    /// Electrical rotor speed at the sample.
    pub omega: T,
    /// `dθ_O/dt` by centered differences of the unwrapped θ_O sequence.
    pub theta_o_rate: T,
    /// Bracketed ratio of the geometric reformulation; exactly 1 for PMSM
    /// and SyRM.
    pub approx_factor: T,
}

/// Geometric margin at sample `k` of a trajectory (`1 ≤ k ≤ len−2`).
///
/// θ_O is differenced over the uniform grid rather than differentiated
/// analytically, so the geometric check stays independent of the current
/// derivatives exercised elsewhere.
pub fn sm_geometric_margin<T: Real>(
    traj: &Trajectory<T, SmState<T>>,
    k: usize,
    params: &SmParams<T>,
) -> Result<SmMargin<T>> {
    if k == 0 || k + 1 >= traj.samples.len() {
        return Err(Error::Mismatch(format!(
            "sample index {k} outside centered-difference range 1..{}",
            traj.samples.len().saturating_sub(1)
        )));
    }
    let theta_prev = sm_observability_vector(&traj.samples[k - 1].state, params)?.theta_o;
    let theta_here = sm_observability_vector(&traj.samples[k].state, params)?.theta_o;
    let theta_next = sm_observability_vector(&traj.samples[k + 1].state, params)?.theta_o;

    // unwrap the triple around the central sample
    let unwrap = |theta: T, reference: T| {
        let tau = T::two_pi();
        theta - tau * ((theta - reference) / tau).round()
    };
    let prev = unwrap(theta_prev, theta_here);
    let next = unwrap(theta_next, theta_here);
    let rate = (next - prev) / (T::of(2.0) * traj.dt);

    let state = &traj.samples[k].state;
    let approx_factor = if params.variant.is_pinned() {
        // L_Δ = L_δ makes numerator and denominator identical
        T::one()
    } else {
        let i_dq = park(state.i.xy(), state.theta);
        let psi_od = params.l_delta() * i_dq[0] + params.m_f * state.i[2];
        let (l_del, l_ddel) = (params.l_delta(), params.l_ddelta());
        let numer = psi_od * psi_od + l_ddel * l_ddel * i_dq[1] * i_dq[1];
        let denom = psi_od * psi_od + l_ddel * l_del * i_dq[1] * i_dq[1];
        numer / denom
    };

    Ok(SmMargin {
        omega: state.omega,
        theta_o_rate: rate,
        approx_factor,
    })
}
