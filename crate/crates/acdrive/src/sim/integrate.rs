//! Classical fixed-step fourth-order Runge–Kutta integration.
//!
//! The grid is exact (`t_k = k·dt` computed from the integer index), the
//! PMSM/SyRM field-current pin is re-asserted after every step, and a guard
//! aborts with a divergence error once any state magnitude exceeds 1e9.

use crate::error::{Error, Result};
use crate::linalg::{Vec2, Vec3, Vector};
use crate::models::{im_dynamics_with, sm_dynamics, ImDerived, ImParams, ImState, SmParams, SmState};
use crate::num::Real;
use crate::sim::{excite, MachineSpec, Sample, Scenario, TorqueProfile, Trajectory, TrajectoryData};

/// State magnitude beyond which the integration is declared divergent.
/// Far above any physical value for the desk-scale parameter sets.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

fn rk4_step<T: Real, const N: usize>(
    f: &mut impl FnMut(T, &Vector<T, N>) -> Result<Vector<T, N>>,
    t: T,
    x: &Vector<T, N>,
    dt: T,
) -> Result<Vector<T, N>> {
    let half = T::of(0.5);
    let sixth = T::of(6.0).recip();
    let two = T::of(2.0);
    let k1 = f(t, x)?;
    let k2 = f(t + half * dt, &(*x + k1.scale(half * dt)))?;
    let k3 = f(t + half * dt, &(*x + k2.scale(half * dt)))?;
    let k4 = f(t + dt, &(*x + k3.scale(dt)))?;
    Ok(*x + (k1 + k2.scale(two) + k3.scale(two) + k4).scale(dt * sixth))
}

fn guard_divergence<T: Real, const N: usize>(x: &Vector<T, N>, t: T) -> Result<()> {
    let mag = x.max_abs();
    if !x.is_finite() || mag > T::of(DIVERGENCE_LIMIT) {
        return Err(Error::Divergence {
            t: t.to_f64().unwrap_or(f64::NAN),
            magnitude: mag.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Integrate a scenario over its horizon, recording state, input and exact
/// input derivative at every grid point. Deterministic for a given scenario.
pub fn integrate<T: Real>(scenario: &Scenario<T>) -> Result<TrajectoryData<T>> {
    scenario.validate()?;
    let n = scenario.n_steps();
    match &scenario.machine {
        MachineSpec::Im { params, x0 } => {
            let u_of = |t: T| excite(&scenario.excitation, t).0.xy();
            let mut traj =
                integrate_im_raw(params, x0, u_of, &scenario.load, scenario.dt, n)?;
            // record the full excitation (field channel zeroed for the IM)
            for sample in traj.samples.iter_mut() {
                let (u, du) = excite(&scenario.excitation, sample.t);
                sample.u = Vec3::new(u[0], u[1], T::zero());
                sample.u_dot = Vec3::new(du[0], du[1], T::zero());
            }
            Ok(TrajectoryData::Im(traj))
        }
        MachineSpec::Sm { params, x0 } => {
            let u_of = |t: T| excite(&scenario.excitation, t).0;
            let mut traj =
                integrate_sm_raw(params, x0, u_of, &scenario.load, scenario.dt, n)?;
            for sample in traj.samples.iter_mut() {
                let (u, du) = excite(&scenario.excitation, sample.t);
                sample.u = u;
                sample.u_dot = du;
            }
            Ok(TrajectoryData::Sm(traj))
        }
    }
}

/// IM integration from an arbitrary state under a closure input.
///
/// `u_dot` in the returned samples is left at zero; [`integrate`] fills it
/// from the excitation profile. Negative `dt` integrates backwards (used by
/// the dynamics-consistency checks).
pub(crate) fn integrate_im_raw<T: Real>(
    params: &ImParams<T>,
    x0: &ImState<T>,
    u_of: impl Fn(T) -> Vec2<T>,
    load: &TorqueProfile<T>,
    dt: T,
    n_steps: usize,
) -> Result<Trajectory<T, ImState<T>>> {
    let derived = ImDerived::new_unchecked(params);
    let mut f = |t: T, x: &Vector<T, 6>| -> Result<Vector<T, 6>> {
        Ok(im_dynamics_with(&ImState::from_vec(x), u_of(t), params, &derived).to_vec())
    };
    let mut x = x0.to_vec();
    let mut samples = Vec::with_capacity(n_steps + 1);
    for k in 0..=n_steps {
        let t = T::from_usize(k).expect("grid index fits scalar") * dt;
        // resistant torque is a state with Ṫ_r = 0; profile changes step it
        x[5] = load.value_or(t, x0.t_r);
        guard_divergence(&x, t)?;
        samples.push(Sample {
            t,
            state: ImState::from_vec(&x),
            u: Vec3::zeros(),
            u_dot: Vec3::zeros(),
        });
        if k < n_steps {
            x = rk4_step(&mut f, t, &x, dt)?;
        }
    }
    Ok(Trajectory { dt, samples })
}

/// SM integration from an arbitrary state under a closure input.
///
/// θ is integrated unwrapped and wrapped to `[0, 2π)` in the recorded
/// samples; the field-current pin is re-asserted after every step.
pub(crate) fn integrate_sm_raw<T: Real>(
    params: &SmParams<T>,
    x0: &SmState<T>,
    u_of: impl Fn(T) -> Vec3<T>,
    load: &TorqueProfile<T>,
    dt: T,
    n_steps: usize,
) -> Result<Trajectory<T, SmState<T>>> {
    let pin = params.pinned_field_current();
    let mut f = |t: T, x: &Vector<T, 5>| -> Result<Vector<T, 5>> {
        let t_r = load.value_or(t, T::zero());
        Ok(sm_dynamics(&SmState::from_vec(x), u_of(t), t_r, params)?.to_vec())
    };
    let mut x = x0.to_vec();
    if let Some(pin) = pin {
        x[2] = pin;
    }
    let mut samples = Vec::with_capacity(n_steps + 1);
    for k in 0..=n_steps {
        let t = T::from_usize(k).expect("grid index fits scalar") * dt;
        guard_divergence(&x, t)?;
        let mut recorded = SmState::from_vec(&x);
        recorded.theta = recorded.theta.wrap_angle();
        samples.push(Sample {
            t,
            state: recorded,
            u: Vec3::zeros(),
            u_dot: Vec3::zeros(),
        });
        if k < n_steps {
            x = rk4_step(&mut f, t, &x, dt)?;
            if let Some(pin) = pin {
                x[2] = pin;
            }
        }
    }
    Ok(Trajectory { dt, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{AnalysisSettings, ExcitationProfile};

    fn im_scenario(excitation: ExcitationProfile<f64>, duration: f64) -> Scenario<f64> {
        Scenario {
            machine: MachineSpec::Im {
                params: ImParams::desk_default(),
                x0: ImState::zero(),
            },
            excitation,
            load: TorqueProfile::none(),
            dt: 1e-4,
            duration,
            analysis: AnalysisSettings::default(),
        }
    }

    #[test]
    fn equilibrium_preserved() {
        let traj = integrate(&im_scenario(ExcitationProfile::zero(), 0.02)).unwrap();
        let TrajectoryData::Im(traj) = traj else { panic!() };
        assert_eq!(traj.samples.len(), 201);
        for s in &traj.samples {
            assert_eq!(s.state.to_vec().0, [0.0; 6]);
        }
    }

    #[test]
    fn grid_is_exact_and_deterministic() {
        let sc = im_scenario(ExcitationProfile::sinusoid(10.0, 50.0, 0.0), 0.05);
        let TrajectoryData::Im(a) = integrate(&sc).unwrap() else { panic!() };
        let TrajectoryData::Im(b) = integrate(&sc).unwrap() else { panic!() };
        assert_eq!(a, b, "identical scenarios must yield identical trajectories");
        for (k, s) in a.samples.iter().enumerate() {
            assert_eq!(s.t, k as f64 * 1e-4);
        }
    }

    #[test]
    fn unstable_step_trips_divergence_guard() {
        // |a|·dt far beyond the RK4 stability boundary.
        let mut sc = im_scenario(ExcitationProfile::sinusoid(10.0, 50.0, 0.0), 40.0);
        sc.dt = 0.1;
        match integrate(&sc) {
            Err(Error::Divergence { .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn pinned_field_current_never_deviates() {
        use crate::models::SmVariant;
        let params = SmParams::<f64>::desk_default(SmVariant::Ipmsm);
        let pin = params.pinned_field_current().unwrap();
        let mut x0 = SmState::zero();
        x0.i[2] = pin;
        let sc = Scenario {
            machine: MachineSpec::Sm { params, x0 },
            excitation: ExcitationProfile::sinusoid(10.0, 20.0, 0.0),
            load: TorqueProfile::none(),
            dt: 1e-4,
            duration: 0.2,
            analysis: AnalysisSettings::default(),
        };
        let TrajectoryData::Sm(traj) = integrate(&sc).unwrap() else { panic!() };
        for s in &traj.samples {
            assert_eq!(s.state.i[2], pin);
            assert!((0.0..std::f64::consts::TAU).contains(&s.state.theta));
        }
    }

    #[test]
    fn free_decay_magnetic_energy_non_increasing() {
        // start at an aligned DC steady state (zero torque, rotor at rest),
        // cut the supply: stored magnetic energy
        // W = ½σL_s‖𝓘‖² + ‖Ψ‖²/(2L_r) can only dissipate
        let params = ImParams::<f64>::desk_default();
        let sigma = params.sigma();
        let i0 = Vec2::new(6.0, 2.5);
        let x0 = ImState {
            i_s: i0,
            psi_r: i0.scale(params.m),
            omega_e: 0.0,
            t_r: 0.0,
        };
        let sc = Scenario {
            machine: MachineSpec::Im { params, x0 },
            excitation: ExcitationProfile::zero(),
            load: TorqueProfile::none(),
            dt: 1e-4,
            duration: 1.0,
            analysis: AnalysisSettings::default(),
        };
        let TrajectoryData::Im(traj) = integrate(&sc).unwrap() else { panic!() };
        let energy = |x: &ImState<f64>| {
            0.5 * sigma * params.l_s * x.i_s.norm_sq() + x.psi_r.norm_sq() / (2.0 * params.l_r)
        };
        let mut prev = energy(&traj.samples[0].state);
        for s in &traj.samples[1..] {
            let w = energy(&s.state);
            assert!(w <= prev * (1.0 + 1e-12), "magnetic energy rose at t = {}", s.t);
            prev = w;
        }
        assert!(prev < 1e-2 * energy(&traj.samples[0].state), "decay well underway");
    }

    #[test]
    fn rk4_order_on_smooth_problem() {
        // step-halving on a short 50 Hz run; observed order must be ≥ 3.5
        let base = im_scenario(ExcitationProfile::sinusoid(20.0, 50.0, 0.0), 0.1);
        let run = |dt: f64| {
            let mut sc = base.clone();
            sc.dt = dt;
            let TrajectoryData::Im(t) = integrate(&sc).unwrap() else { panic!() };
            t.samples.last().unwrap().state.to_vec()
        };
        let x1 = run(2e-4);
        let x2 = run(1e-4);
        let x3 = run(5e-5);
        let e1 = (x1 - x3).max_abs();
        let e2 = (x2 - x3).max_abs();
        let order = (e1 / e2).log2();
        assert!(order >= 3.5, "observed RK4 order {order}");
    }
}
