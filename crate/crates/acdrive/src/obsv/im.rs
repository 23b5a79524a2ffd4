//! IM observability: the 6×6 matrix of stacked output-derivative Jacobians
//! (in the scaled variables Ĩ = σL_s𝓘, Ψ̃ = (M/L_r)Ψ), its closed-form
//! determinant, and the geometric flux-angle-rate margin.

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat6, Vec2, Vec6};
use crate::models::{gamma_mat, ImDerived, ImParams, ImState};
use crate::num::Real;

/// Scaled state vector `(Ĩ_s, Ψ̃_r, ω_e, T_r)` as a 6-vector; the
/// coordinate system of [`im_obsv_matrix`] and the IM oracle.
pub fn scaled_state6<T: Real>(x: &ImState<T>, params: &ImParams<T>, d: &ImDerived<T>) -> Vec6<T> {
    let sls = d.sigma * params.l_s;
    let m_lr = params.m / params.l_r;
    Vec6::from([
        sls * x.i_s[0],
        sls * x.i_s[1],
        m_lr * x.psi_r[0],
        m_lr * x.psi_r[1],
        x.omega_e,
        x.t_r,
    ])
}

fn split6<T: Real>(xs: &Vec6<T>) -> (Vec2<T>, Vec2<T>, T, T) {
    (
        Vec2::new(xs[0], xs[1]),
        Vec2::new(xs[2], xs[3]),
        xs[4],
        xs[5],
    )
}

/// ω̇_e of the scaled system: `(c/J)·Ĩᵀ𝕁₂Ψ̃ − (p/J)·T_r`.
fn scaled_omega_rate<T: Real>(
    i: &Vec2<T>,
    psi: &Vec2<T>,
    t_r: T,
    params: &ImParams<T>,
    d: &ImDerived<T>,
) -> T {
    let pp = T::from_u32(params.pole_pairs).expect("pole pair count fits scalar");
    d.c / params.inertia * psi.cross(i) - pp / params.inertia * t_r
}

/// Scaled-variable dynamics of the full 6-state.
pub(crate) fn scaled_dynamics6<T: Real>(
    xs: &Vec6<T>,
    u: Vec2<T>,
    params: &ImParams<T>,
    d: &ImDerived<T>,
) -> Vec6<T> {
    let (i, psi, omega, t_r) = split6(xs);
    let gamma = gamma_mat(d.tau_r, omega);
    let di = u + i.scale(d.a) + gamma.mul_vec(&psi);
    let dpsi = -gamma.mul_vec(&psi) - i.scale(d.a - d.b);
    let domega = scaled_omega_rate(&i, &psi, t_r, params, d);
    Vec6::from([di[0], di[1], dpsi[0], dpsi[1], domega, T::zero()])
}

/// Output chain `(y, ẏ, ÿ)` of the scaled system as a stacked 6-vector.
///
/// `ÿ = 𝒱̇ + a𝒱 + (a²𝕀 − (a−b)γ)Ĩ + (γ̇ + aγ − γ²)Ψ̃` with `γ̇ = −ω̇𝕁₂`.
pub(crate) fn output_chain<T: Real>(
    xs: &Vec6<T>,
    u: Vec2<T>,
    u_dot: Vec2<T>,
    params: &ImParams<T>,
    d: &ImDerived<T>,
) -> Vec6<T> {
    let (i, psi, omega, _) = split6(xs);
    let gamma = gamma_mat(d.tau_r, omega);
    let rates = scaled_dynamics6(xs, u, params, d);
    let y_dot = Vec2::new(rates[0], rates[1]);

    let omega_rate = rates[4];
    let gamma_dot = Mat2::j2().scale(-omega_rate);
    let a2_term = Mat2::identity().scale(d.a * d.a) - gamma.scale(d.a - d.b);
    let psi_term = gamma_dot + gamma.scale(d.a) - gamma.mul_mat(&gamma);
    let y_ddot = u_dot + u.scale(d.a) + a2_term.mul_vec(&i) + psi_term.mul_vec(&psi);

    Vec6::from([i[0], i[1], y_dot[0], y_dot[1], y_ddot[0], y_ddot[1]])
}

/// The 6×6 IM observability matrix evaluated at `x` in scaled variables:
/// rows are the Jacobians of `y`, `ẏ`, `ÿ`, columns follow the state order
/// `(ĩ_sα, ĩ_sβ, ψ̃_rα, ψ̃_rβ, ω_e, T_r)`. `dω_e/dt` needed by the second
/// derivative rows is substituted from the speed equation at `x`.
pub fn im_obsv_matrix<T: Real>(x: &ImState<T>, params: &ImParams<T>) -> Mat6<T> {
    let d = ImDerived::new_unchecked(params);
    im_obsv_matrix_with(x, params, &d)
}

pub(crate) fn im_obsv_matrix_with<T: Real>(
    x: &ImState<T>,
    params: &ImParams<T>,
    d: &ImDerived<T>,
) -> Mat6<T> {
    let xs = scaled_state6(x, params, d);
    let (i, psi, omega, t_r) = split6(&xs);
    let (ia, ib) = (i[0], i[1]);
    let (pa, pb) = (psi[0], psi[1]);
    let inv_tau = d.tau_r.recip();
    let (a, b) = (d.a, d.b);
    let c_j = d.c / params.inertia;
    let pp = T::from_u32(params.pole_pairs).expect("pole pair count fits scalar");
    let p_j = pp / params.inertia;
    let omega_rate = scaled_omega_rate(&i, &psi, t_r, params, d);
    let two = T::of(2.0);
    let zero = T::zero();
    let one = T::one();

    let d11 = a * a - (a - b) * inv_tau - c_j * pb * pb;
    let d12 = -(a - b) * omega + c_j * pa * pb;
    let d21 = (a - b) * omega + c_j * pa * pb;
    let d22 = a * a - (a - b) * inv_tau - c_j * pa * pa;

    let e11 = a * inv_tau - inv_tau * inv_tau + omega * omega + c_j * ib * pb;
    let e12 = a * omega - two * omega * inv_tau + omega_rate - c_j * ia * pb;
    let e21 = -a * omega + two * omega * inv_tau - omega_rate - c_j * ib * pa;
    let e22 = a * inv_tau - inv_tau * inv_tau + omega * omega + c_j * ia * pa;

    let f11 = two * omega * pa - (a - b) * ib + (a - two * inv_tau) * pb;
    let f12 = -p_j * pb;
    let f21 = two * omega * pb + (a - b) * ia - (a - two * inv_tau) * pa;
    let f22 = p_j * pa;

    Mat6::from_rows([
        [one, zero, zero, zero, zero, zero],
        [zero, one, zero, zero, zero, zero],
        [a, zero, inv_tau, omega, pb, zero],
        [zero, a, -omega, inv_tau, -pa, zero],
        [d11, d12, e11, e12, f11, f12],
        [d21, d22, e21, e22, f21, f22],
    ])
}

/// Physical flux and speed rates used by the determinant and the margins.
fn flux_and_speed_rates<T: Real>(
    x: &ImState<T>,
    params: &ImParams<T>,
    d: &ImDerived<T>,
) -> (Vec2<T>, T) {
    let gamma = gamma_mat(d.tau_r, x.omega_e);
    let psi_dot = -gamma.mul_vec(&x.psi_r) + x.i_s.scale(params.m / d.tau_r);
    let pp = T::from_u32(params.pole_pairs).expect("pole pair count fits scalar");
    let omega_rate = T::of(1.5) * pp * pp / params.inertia * (params.m / params.l_r)
        * x.psi_r.cross(&x.i_s)
        - pp / params.inertia * x.t_r;
    (psi_dot, omega_rate)
}

/// Closed-form determinant of the IM observability matrix:
///
/// `Δ_IM = (p/J)(M²/L_r²)·[(1/τ_r)·ω̇_e·‖Ψ_r‖² − (ω_e² + 1/τ_r²)·(ψ̇_rα ψ_rβ − ψ̇_rβ ψ_rα)]`
///
/// with the flux and speed rates substituted from the model equations at `x`.
pub fn im_delta<T: Real>(x: &ImState<T>, params: &ImParams<T>) -> T {
    let (t1, t2) = im_delta_terms(x, params);
    t1 - t2
}

/// The two additive terms of `Δ_IM`; their absolute sum is the natural
/// cancellation scale for "Δ is numerically zero" decisions.
pub fn im_delta_terms<T: Real>(x: &ImState<T>, params: &ImParams<T>) -> (T, T) {
    let d = ImDerived::new_unchecked(params);
    let (psi_dot, omega_rate) = flux_and_speed_rates(x, params, &d);
    let pp = T::from_u32(params.pole_pairs).expect("pole pair count fits scalar");
    let prefactor = pp / params.inertia * (params.m * params.m) / (params.l_r * params.l_r);
    let inv_tau = d.tau_r.recip();
    let t1 = prefactor * inv_tau * omega_rate * x.psi_r.norm_sq();
    let cross = psi_dot[0] * x.psi_r[1] - psi_dot[1] * x.psi_r[0];
    let t2 = prefactor * (x.omega_e * x.omega_e + inv_tau * inv_tau) * cross;
    (t1, t2)
}

/// Both sides of the IM geometric observability condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImMargin<T> {
    /// ω_s: angular frequency of the rotating magnetic field, i.e. the
    /// rotor-flux angle rate `dθ_s/dt = (ψ̇_rβ ψ_rα − ψ̇_rα ψ_rβ)/‖Ψ_r‖²`.
    pub omega_s: T,
    /// `d/dt arctan(τ_r ω_e) = τ_r ω̇_e/(1 + τ_r²ω_e²)`.
    pub rhs: T,
}

/// Geometric margin sides evaluated from the model equations at `x`.
///
/// Errors when the flux angle is undefined (`‖Ψ_r‖ ≤ 1e−12`).
pub fn im_geometric_margin<T: Real>(x: &ImState<T>, params: &ImParams<T>) -> Result<ImMargin<T>> {
    let d = ImDerived::new_unchecked(params);
    let norm_sq = x.psi_r.norm_sq();
    let floor = T::of(1e-12);
    if norm_sq.sqrt() <= floor {
        return Err(Error::UndefinedAngle {
            norm: norm_sq.sqrt().to_f64().unwrap_or(0.0),
        });
    }
    let (psi_dot, omega_rate) = flux_and_speed_rates(x, params, &d);
    let omega_s = x.psi_r.cross(&psi_dot) / norm_sq;
    let rhs = d.tau_r * omega_rate / (T::one() + d.tau_r * d.tau_r * x.omega_e * x.omega_e);
    Ok(ImMargin { omega_s, rhs })
}
