//! The numerical core is generic over the scalar: everything that runs in
//! f64 must run in f32 and agree to single precision.

use acdrive::linalg::{Vec2, Vec3};
use acdrive::models::{
    im_derived, im_dynamics, inverse_park, park, ImParams, ImState, SmParams, SmState, SmVariant,
};
use acdrive::obsv::{im_delta, im_obsv_matrix, rank_analysis, sm_delta};
use acdrive::sim::{
    integrate, AnalysisSettings, ExcitationProfile, MachineSpec, Scenario, TorqueProfile,
    TrajectoryData,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn im_core_agrees_across_scalar_types() {
    let p64 = ImParams::<f64>::desk_default();
    let p32 = ImParams::<f32>::desk_default();
    let d64 = im_derived(&p64).unwrap();
    let d32 = im_derived(&p32).unwrap();
    assert!(close(d32.a as f64, d64.a, 1e-5));
    assert!(close(d32.c as f64, d64.c, 1e-5));

    let x64 = ImState {
        i_s: Vec2::new(4.0f64, -1.5),
        psi_r: Vec2::new(0.6, 0.2),
        omega_e: 250.0,
        t_r: 1.0,
    };
    let x32 = ImState {
        i_s: Vec2::new(4.0f32, -1.5),
        psi_r: Vec2::new(0.6, 0.2),
        omega_e: 250.0,
        t_r: 1.0,
    };
    let f64v = im_dynamics(&x64, Vec2::new(20.0, -5.0), &p64).to_vec();
    let f32v = im_dynamics(&x32, Vec2::new(20.0, -5.0), &p32).to_vec();
    for k in 0..6 {
        assert!(close(f32v[k] as f64, f64v[k], 1e-4), "component {k}");
    }

    let delta32 = im_delta(&x32, &p32) as f64;
    let delta64 = im_delta(&x64, &p64);
    assert!(close(delta32, delta64, 1e-3), "{delta32} vs {delta64}");

    let rank32 = rank_analysis(&im_obsv_matrix(&x32, &p32), 1e-4f32);
    let rank64 = rank_analysis(&im_obsv_matrix(&x64, &p64), 1e-4f64);
    assert_eq!(rank32.rank, rank64.rank);
}

#[test]
fn sm_delta_and_park_in_f32() {
    let p = SmParams::<f32>::desk_default(SmVariant::Wrsm);
    let x = SmState {
        i: Vec3::new(6.0f32, -2.0, 3.0),
        omega: 120.0,
        theta: 0.7,
    };
    let u = Vec3::new(15.0f32, -8.0, 4.0);
    let d = sm_delta(&x, u, &p).unwrap();
    let p64 = SmParams::<f64>::desk_default(SmVariant::Wrsm);
    let x64 = SmState {
        i: Vec3::new(6.0f64, -2.0, 3.0),
        omega: 120.0,
        theta: 0.7,
    };
    let u64 = Vec3::new(15.0f64, -8.0, 4.0);
    let d64 = sm_delta(&x64, u64, &p64).unwrap();
    assert!(
        close(d.specialized as f64, d64.specialized, 1e-3),
        "{} vs {}",
        d.specialized,
        d64.specialized
    );

    let v = Vec2::new(3.0f32, -4.0);
    let round = inverse_park(park(v, 1.2), 1.2);
    assert!((round - v).norm() <= 1e-5 * v.norm());
}

#[test]
fn integration_runs_in_f32() {
    let params = ImParams::<f32>::desk_default();
    let scenario = Scenario {
        machine: MachineSpec::Im { params, x0: ImState::zero() },
        excitation: ExcitationProfile::sinusoid(20.0f32, 50.0, 0.0),
        load: TorqueProfile::constant(0.1),
        dt: 1e-4,
        duration: 0.05,
        analysis: AnalysisSettings::default(),
    };
    let TrajectoryData::Im(traj) = integrate(&scenario).unwrap() else { panic!() };
    assert_eq!(traj.samples.len(), 501);
    assert!(traj.samples.iter().all(|s| s.state.is_finite()));
    // the machine responds: currents are no longer zero at the end
    assert!(traj.samples.last().unwrap().state.i_s.norm() > 0.1);
}
