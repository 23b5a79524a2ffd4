//! Finite-difference realization of the observability rank condition: the
//! Jacobian of the stacked output derivatives, built by perturbing each
//! state coordinate and re-evaluating the closed-form model equations with
//! the inputs held fixed. This is the independent check against which every
//! closed-form matrix and determinant in this module is validated.

use crate::error::Result;
use crate::linalg::{Mat6, Mat6x5, Vec2, Vec3, Vec6};
use crate::models::{sm_current_dynamics, ImDerived, ImParams, SmParams, SmState};
use crate::num::Real;
use crate::obsv::im::output_chain;

/// Mixed absolute/relative finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

fn step_for<T: Real>(value: T, h_base: T) -> T {
    h_base.max(h_base * value.abs())
}

/// IM oracle: `∂(y, ẏ, ÿ)/∂x̃` by central differences in the scaled state
/// `x̃ = (Ĩ_s, Ψ̃_r, ω_e, T_r)`, matching the coordinates of the closed-form
/// matrix. Covers output derivatives up to second order, as the analysis
/// uses; the first-order block is rows 1–4 of the result.
pub fn im_lie_oracle<T: Real>(
    xs: &Vec6<T>,
    u: Vec2<T>,
    u_dot: Vec2<T>,
    params: &ImParams<T>,
    derived: &ImDerived<T>,
    h_base: T,
) -> Mat6<T> {
    let mut m = Mat6::zeros();
    for j in 0..6 {
        let h = step_for(xs[j], h_base);
        let mut xp = *xs;
        let mut xm = *xs;
        xp[j] += h;
        xm[j] -= h;
        // realized step after rounding, so linear rows come out exact
        let h2 = xp[j] - xm[j];
        let fp = output_chain(&xp, u, u_dot, params, derived);
        let fm = output_chain(&xm, u, u_dot, params, derived);
        for i in 0..6 {
            m[(i, j)] = (fp[i] - fm[i]) / h2;
        }
    }
    m
}

/// SM oracle: `∂(y, ẏ)/∂x` by central differences in the physical state
/// `(i_α, i_β, i_f, ω, θ)`; first order only, as the analysis uses.
///
/// The θ coordinate uses the absolute step: an angle is 2π-periodic, so the
/// relative scaling would only inflate the trigonometric truncation error.
pub fn sm_lie_oracle<T: Real>(
    x: &SmState<T>,
    u: Vec3<T>,
    params: &SmParams<T>,
    h_base: T,
) -> Result<Mat6x5<T>> {
    let chain = |x: &SmState<T>| -> Result<Vec6<T>> {
        let di = sm_current_dynamics(x, u, params)?;
        Ok(Vec6::from([x.i[0], x.i[1], x.i[2], di[0], di[1], di[2]]))
    };
    let x5 = x.to_vec();
    let mut m = Mat6x5::zeros();
    for j in 0..5 {
        let h = if j == 4 { h_base } else { step_for(x5[j], h_base) };
        let mut xp = x5;
        let mut xm = x5;
        xp[j] += h;
        xm[j] -= h;
        let h2 = xp[j] - xm[j];
        let fp = chain(&SmState::from_vec(&xp))?;
        let fm = chain(&SmState::from_vec(&xm))?;
        for i in 0..6 {
            m[(i, j)] = (fp[i] - fm[i]) / h2;
        }
    }
    Ok(m)
}
