//! Seeded verification suite: oracle equivalence, determinant consistency,
//! specialization identities, transform round trips and numerics hygiene.
//!
//! The suite is deterministic for a given seed and doubles as the backend of
//! the `verify` CLI subcommand. `mutate` deliberately tampers with the IM
//! determinant formula to demonstrate that the consistency checks are
//! sensitive to transcription errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Mat5, Matrix, Vec2, Vec3};
use crate::models::{
    im_derived, im_dynamics, im_scale, im_unscale, inverse_park, park, ImParams, ImState,
    SmParams, SmState, SmVariant,
};
use crate::obsv::{
    im_delta, im_delta_terms, im_lie_oracle, im_obsv_matrix, rank_analysis, sm_delta,
    sm_geometric_margin, sm_lie_oracle, sm_obsv_matrix,
};
use crate::obsv::im_scaled_state;
use crate::sim::{
    integrate, steady_state_hint, AnalysisSettings, ExcitationProfile, MachineSpec, Scenario,
    TorqueProfile, TrajectoryData,
};

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub n_states: usize,
    pub mutate: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 42, n_states: 1000, mutate: false }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    /// Worst observed error, in the units of the property's bound.
    pub worst: f64,
    /// The bound the worst error is held against.
    pub bound: f64,
    pub detail: String,
}

impl PropertyResult {
    fn new(name: &str, worst: f64, bound: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: worst <= bound,
            worst,
            bound,
            detail,
        }
    }
}

// ── random state generation (physically sensible ranges) ───────────

fn random_im_state(rng: &mut impl Rng) -> ImState<f64> {
    ImState {
        i_s: Vec2::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)),
        psi_r: Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        omega_e: rng.gen_range(-600.0..600.0),
        t_r: rng.gen_range(-10.0..10.0),
    }
}

fn random_im_input(rng: &mut impl Rng) -> Vec2<f64> {
    Vec2::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0))
}

fn random_sm_state(rng: &mut impl Rng, params: &SmParams<f64>) -> SmState<f64> {
    let i_f = params
        .pinned_field_current()
        .unwrap_or_else(|| rng.gen_range(-10.0..10.0));
    SmState {
        i: Vec3::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0), i_f),
        omega: rng.gen_range(-600.0..600.0),
        theta: rng.gen_range(0.0..std::f64::consts::TAU),
    }
}

fn random_sm_input(rng: &mut impl Rng) -> Vec3<f64> {
    Vec3::new(
        rng.gen_range(-50.0..50.0),
        rng.gen_range(-50.0..50.0),
        rng.gen_range(-20.0..20.0),
    )
}

// ── scale-constant estimation ───────────────────────────────────────

/// Fit the state-independent constant `s` in `a ≈ s·b` over `(a, b)` pairs,
/// then report the worst floor-guarded relative error and the coefficient
/// of variation of the per-state ratios on the well-conditioned subset.
///
/// `floors[i]` is the per-state numerical-zero scale (the cancellation sum
/// of the formula's terms, scaled by how well the route can resolve zero).
struct ScaleFit {
    scale: f64,
    worst_rel: f64,
    cv: f64,
}

fn fit_scale(pairs: &[(f64, f64)], floors: &[f64]) -> ScaleFit {
    assert_eq!(pairs.len(), floors.len());
    let mut mags: Vec<f64> = pairs.iter().map(|(_, b)| b.abs()).collect();
    mags.sort_by(|x, y| x.partial_cmp(y).expect("finite determinants"));
    let median = mags[mags.len() / 2];

    let ratios: Vec<f64> = pairs
        .iter()
        .filter(|(_, b)| b.abs() >= 0.05 * median && b.abs() > 0.0)
        .map(|(a, b)| a / b)
        .collect();
    if ratios.is_empty() {
        return ScaleFit { scale: 1.0, worst_rel: f64::INFINITY, cv: f64::INFINITY };
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite ratios"));
    let scale = sorted[sorted.len() / 2];

    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let var = ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / ratios.len() as f64;
    let cv = var.sqrt() / mean.abs();

    let mut worst_rel = 0.0f64;
    for ((a, b), floor) in pairs.iter().zip(floors) {
        let sb = scale * b;
        let denom = a.abs().max(sb.abs()).max(*floor);
        worst_rel = worst_rel.max((a - sb).abs() / denom);
    }
    ScaleFit { scale, worst_rel, cv }
}

fn five_by_five(m: &Matrix<f64, 6, 5>) -> Mat5<f64> {
    let mut out = Mat5::zeros();
    for r in 0..5 {
        for c in 0..5 {
            out[(r, c)] = m[(r, c)];
        }
    }
    out
}

/// Worst per-entry relative error with an absolute floor at 1e−4 of the
/// matrix magnitude: entries four decades below the matrix scale carry no
/// more FD precision than double-precision cancellation leaves them.
fn entrywise_error<const R: usize, const C: usize>(
    a: &Matrix<f64, R, C>,
    b: &Matrix<f64, R, C>,
) -> f64 {
    let floor = 1e-4 * a.max_abs().max(b.max_abs());
    let mut worst = 0.0f64;
    for i in 0..R {
        for j in 0..C {
            let denom = a[(i, j)].abs().max(b[(i, j)].abs()).max(floor);
            worst = worst.max((a[(i, j)] - b[(i, j)]).abs() / denom);
        }
    }
    worst
}

/// IM determinant with the optional formula tampering used by mutation mode:
/// the ω̇ term picks up a 1% error, which every consistency check must catch.
fn im_delta_maybe_mutated(x: &ImState<f64>, p: &ImParams<f64>, mutate: bool) -> f64 {
    let (t1, t2) = im_delta_terms(x, p);
    if mutate {
        t1 * 1.01 - t2
    } else {
        t1 - t2
    }
}

// ── the suite ───────────────────────────────────────────────────────

pub fn run_verify(cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let mut results = Vec::new();
    let n = cfg.n_states.max(1);
    let im_params = ImParams::<f64>::desk_default();
    let im_d = im_derived(&im_params).expect("desk defaults valid");

    // draw the shared random ensembles up front
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let im_states: Vec<(ImState<f64>, Vec2<f64>, Vec2<f64>)> = (0..n)
        .map(|_| {
            (
                random_im_state(&mut rng),
                random_im_input(&mut rng),
                random_im_input(&mut rng),
            )
        })
        .collect();

    // 1. IM closed-form matrix vs FD oracle, entrywise
    {
        let mut worst = 0.0f64;
        for (x, u, u_dot) in &im_states {
            let xs = im_scaled_state(x, &im_params, &im_d);
            let oracle = im_lie_oracle(&xs, *u, *u_dot, &im_params, &im_d, 1e-6);
            let analytic = im_obsv_matrix(x, &im_params);
            worst = worst.max(entrywise_error(&oracle, &analytic));
        }
        results.push(PropertyResult::new(
            "im_matrix_vs_oracle",
            worst,
            1e-5,
            format!("entrywise relative error over {n} states"),
        ));
    }

    // 2. Δ_IM vs determinant of the closed-form matrix (scale + CV)
    {
        let pairs: Vec<(f64, f64)> = im_states
            .iter()
            .map(|(x, _, _)| {
                (
                    im_delta_maybe_mutated(x, &im_params, cfg.mutate),
                    im_obsv_matrix(x, &im_params).det(),
                )
            })
            .collect();
        let floors: Vec<f64> = im_states
            .iter()
            .map(|(x, _, _)| {
                let (t1, t2) = im_delta_terms(x, &im_params);
                1e-10 * (t1.abs() + t2.abs())
            })
            .collect();
        let fit = fit_scale(&pairs, &floors);
        results.push(PropertyResult::new(
            "im_delta_vs_matrix_det",
            fit.worst_rel,
            1e-6,
            format!("scale constant {:.12}", fit.scale),
        ));
        results.push(PropertyResult::new(
            "im_delta_scale_constancy",
            fit.cv,
            1e-8,
            format!("coefficient of variation of per-state ratios, s = {:.12}", fit.scale),
        ));
    }

    // 3. Δ_IM vs determinant of the FD oracle matrix
    {
        let pairs: Vec<(f64, f64)> = im_states
            .iter()
            .map(|(x, u, u_dot)| {
                let xs = im_scaled_state(x, &im_params, &im_d);
                (
                    im_delta_maybe_mutated(x, &im_params, cfg.mutate),
                    im_lie_oracle(&xs, *u, *u_dot, &im_params, &im_d, 1e-6).det(),
                )
            })
            .collect();
        let floors: Vec<f64> = im_states
            .iter()
            .map(|(x, _, _)| {
                let (t1, t2) = im_delta_terms(x, &im_params);
                1e-4 * (t1.abs() + t2.abs())
            })
            .collect();
        let fit = fit_scale(&pairs, &floors);
        results.push(PropertyResult::new(
            "im_delta_vs_oracle_det",
            fit.worst_rel,
            1e-5,
            format!("scale constant {:.9}", fit.scale),
        ));
    }

    // 4–6. SM: matrix vs oracle, Δ vs analytic det (scale + CV), Δ vs oracle det
    for variant in SmVariant::ALL {
        let params = SmParams::<f64>::desk_default(variant);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0000 ^ variant as u64);
        let states: Vec<(SmState<f64>, Vec3<f64>)> = (0..n)
            .map(|_| (random_sm_state(&mut rng, &params), random_sm_input(&mut rng)))
            .collect();

        let mut worst_entry = 0.0f64;
        let mut det_pairs = Vec::with_capacity(n);
        let mut oracle_pairs = Vec::with_capacity(n);
        let mut floors_det = Vec::with_capacity(n);
        let mut floors_oracle = Vec::with_capacity(n);
        for (x, u) in &states {
            let analytic = sm_obsv_matrix(x, *u, &params).expect("regular inductance");
            let oracle = sm_lie_oracle(x, *u, &params, 1e-6).expect("regular inductance");
            worst_entry = worst_entry.max(entrywise_error(&oracle, &analytic.full));
            let delta = sm_delta(x, *u, &params).expect("regular inductance");
            det_pairs.push((delta.specialized, analytic.first_five.det()));
            oracle_pairs.push((delta.specialized, five_by_five(&oracle).det()));
            floors_det.push(1e-10 * delta.term_scale);
            floors_oracle.push(1e-4 * delta.term_scale);
        }
        results.push(PropertyResult::new(
            &format!("sm_matrix_vs_oracle[{variant}]"),
            worst_entry,
            1e-5,
            format!("entrywise relative error over {n} states"),
        ));
        let fit = fit_scale(&det_pairs, &floors_det);
        results.push(PropertyResult::new(
            &format!("sm_delta_vs_matrix_det[{variant}]"),
            fit.worst_rel,
            1e-6,
            format!("scale constant {:.12}", fit.scale),
        ));
        results.push(PropertyResult::new(
            &format!("sm_delta_scale_constancy[{variant}]"),
            fit.cv,
            1e-8,
            String::new(),
        ));
        let fit = fit_scale(&oracle_pairs, &floors_oracle);
        results.push(PropertyResult::new(
            &format!("sm_delta_vs_oracle_det[{variant}]"),
            fit.worst_rel,
            1e-5,
            format!("scale constant {:.9}", fit.scale),
        ));
    }

    // 7. general flux form vs specialized formulas
    {
        let mut worst = 0.0f64;
        for variant in SmVariant::ALL {
            let params = SmParams::<f64>::desk_default(variant);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6e6e);
            for _ in 0..n {
                let x = random_sm_state(&mut rng, &params);
                let u = random_sm_input(&mut rng);
                let d = sm_delta(&x, u, &params).expect("regular inductance");
                let err = (d.specialized - d.general).abs() / d.term_scale.max(1e-9);
                worst = worst.max(err);
            }
        }
        results.push(PropertyResult::new(
            "sm_general_form_agreement",
            worst,
            1e-12,
            "specialized vs general flux form, all variants".into(),
        ));
    }

    // 8. specialization chain identities
    {
        let mut worst = 0.0f64;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc4a1);

        // Δ_WRSM with L_δ = 0 ≡ Δ_N-WRSM
        let mut wrsm0 = SmParams::<f64>::desk_default(SmVariant::Wrsm);
        wrsm0.l2 = 0.0;
        let mut nwrsm = wrsm0;
        nwrsm.variant = SmVariant::NWrsm;
        // Δ_IPMSM with ψ_r = 0 ≡ Δ_SyRM
        let mut ipmsm0 = SmParams::<f64>::desk_default(SmVariant::Ipmsm);
        ipmsm0.psi_r = 0.0;
        let mut syrm = ipmsm0;
        syrm.variant = SmVariant::Syrm;
        // Δ_IPMSM with L_δ = 0 ≡ Δ_SPMSM
        let mut ipmsm_ns = SmParams::<f64>::desk_default(SmVariant::Ipmsm);
        ipmsm_ns.l2 = 0.0;
        let mut spmsm = ipmsm_ns;
        spmsm.variant = SmVariant::Spmsm;

        for (a, b) in [(wrsm0, nwrsm), (ipmsm0, syrm), (ipmsm_ns, spmsm)] {
            for _ in 0..n {
                let x = random_sm_state(&mut rng, &a);
                let u = random_sm_input(&mut rng);
                // identical pinning on both sides
                let mut xb = x;
                if let Some(pin) = b.pinned_field_current() {
                    xb.i[2] = pin;
                }
                let mut xa = x;
                if let Some(pin) = a.pinned_field_current() {
                    xa.i[2] = pin;
                }
                let da = sm_delta(&xa, u, &a).expect("regular inductance");
                let db = sm_delta(&xb, u, &b).expect("regular inductance");
                let scale = da.term_scale.max(db.term_scale).max(1e-9);
                worst = worst.max((da.specialized - db.specialized).abs() / scale);
            }
        }
        results.push(PropertyResult::new(
            "sm_specialization_chain",
            worst,
            1e-12,
            "WRSM→N-WRSM, IPMSM→SyRM, IPMSM→SPMSM".into(),
        ));
    }

    // 9. park/inverse_park round trip and norm preservation
    {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9a3c);
        let mut worst = 0.0f64;
        for _ in 0..n {
            let v: Vec2<f64> = Vec2::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
            let theta: f64 = rng.gen_range(-50.0..50.0);
            let round = inverse_park(park(v, theta), theta);
            let scale = v.norm().max(1.0);
            worst = worst.max((round - v).norm() / scale);
            worst = worst.max((park(v, theta).norm() - v.norm()).abs() / scale);
        }
        results.push(PropertyResult::new(
            "park_roundtrip",
            worst,
            1e-12,
            String::new(),
        ));
    }

    // 10. scaling round trip
    {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x51ce);
        let mut worst = 0.0f64;
        for _ in 0..n {
            let x = random_im_state(&mut rng);
            let back = im_unscale(&im_scale(&x, &im_params), &im_params);
            for k in 0..6 {
                let (a, b) = (back.to_vec()[k], x.to_vec()[k]);
                worst = worst.max((a - b).abs() / b.abs().max(1.0));
            }
        }
        results.push(PropertyResult::new(
            "im_scale_roundtrip",
            worst,
            1e-12,
            String::new(),
        ));
    }

    // 11. approximation factor is exactly 1 for PMSM and SyRM
    {
        let mut worst = 0.0f64;
        for variant in [SmVariant::Ipmsm, SmVariant::Spmsm, SmVariant::Syrm] {
            let params = SmParams::<f64>::desk_default(variant);
            let mut x0 = SmState::zero();
            x0.i[2] = params.pinned_field_current().unwrap();
            x0.i[0] = 2.0;
            let scenario = Scenario {
                machine: MachineSpec::Sm { params, x0 },
                excitation: ExcitationProfile::sinusoid(15.0, 25.0, 0.0),
                load: TorqueProfile::none(),
                dt: 1e-4,
                duration: 0.05,
                analysis: AnalysisSettings::default(),
            };
            let TrajectoryData::Sm(traj) = integrate(&scenario).expect("stable") else {
                unreachable!()
            };
            for k in 1..traj.samples.len() - 1 {
                if let Ok(m) = sm_geometric_margin(&traj, k, &params) {
                    worst = worst.max((m.approx_factor - 1.0).abs());
                }
            }
        }
        results.push(PropertyResult::new(
            "sm_approx_factor_exact",
            worst,
            0.0,
            "PMSM/SyRM bracketed ratio".into(),
        ));
    }

    // 12. variant reductions commute with simulation, sample for sample
    {
        let mut worst = 0.0f64;
        let mut wrsm0 = SmParams::<f64>::desk_default(SmVariant::Wrsm);
        wrsm0.l2 = 0.0;
        let mut nwrsm = wrsm0;
        nwrsm.variant = SmVariant::NWrsm;
        let mut ipmsm0 = SmParams::<f64>::desk_default(SmVariant::Ipmsm);
        ipmsm0.psi_r = 0.0;
        let mut syrm = ipmsm0;
        syrm.variant = SmVariant::Syrm;

        for (a, b) in [(wrsm0, nwrsm), (ipmsm0, syrm)] {
            let run = |params: SmParams<f64>| {
                let mut x0 = SmState::zero();
                if let Some(pin) = params.pinned_field_current() {
                    x0.i[2] = pin;
                }
                let scenario = Scenario {
                    machine: MachineSpec::Sm { params, x0 },
                    excitation: ExcitationProfile {
                        kind: crate::sim::ExcitationKind::Sinusoid,
                        amplitude: 12.0,
                        frequency: 20.0,
                        frequency_rate: 0.0,
                        phase: 0.1,
                        field: crate::sim::FieldExcitation {
                            voltage: 5.0,
                            amplitude: 0.0,
                            frequency: 0.0,
                        },
                    },
                    load: TorqueProfile::constant(0.2),
                    dt: 1e-4,
                    duration: 0.1,
                    analysis: AnalysisSettings::default(),
                };
                let TrajectoryData::Sm(t) = integrate(&scenario).expect("stable") else {
                    unreachable!()
                };
                t
            };
            let ta = run(a);
            let tb = run(b);
            for (sa, sb) in ta.samples.iter().zip(tb.samples.iter()) {
                let d = (sa.state.to_vec() - sb.state.to_vec()).max_abs();
                worst = worst.max(d);
            }
        }
        results.push(PropertyResult::new(
            "sm_variant_reduction_trajectories",
            worst,
            0.0,
            "WRSM(L2=0) ≡ N-WRSM and IPMSM(ψr=0) ≡ SyRM, bitwise".into(),
        ));
    }

    // 13. RK4 convergence order by step halving on a 50 Hz IM run
    {
        let run = |dt: f64| {
            let mut x0 = ImState::zero();
            x0.omega_e = 2.0 * std::f64::consts::PI * 48.0;
            let scenario = Scenario {
                machine: MachineSpec::Im { params: im_params, x0 },
                excitation: ExcitationProfile::sinusoid(30.0, 50.0, 0.0),
                load: TorqueProfile::none(),
                dt,
                duration: 0.1,
                analysis: AnalysisSettings::default(),
            };
            let TrajectoryData::Im(t) = integrate(&scenario).expect("stable") else {
                unreachable!()
            };
            t.samples.last().unwrap().state.to_vec()
        };
        let x1 = run(2e-4);
        let x2 = run(1e-4);
        let x3 = run(5e-5);
        let order = ((x1 - x3).max_abs() / (x2 - x3).max_abs()).log2();
        results.push(PropertyResult::new(
            "rk4_convergence_order",
            -order,
            -3.5,
            format!("observed order {order:.3} (bound: ≥ 3.5)"),
        ));
    }

    // 14. FD oracle convergence: O(h²) on the SM (trigonometric in θ);
    // the IM chain is per-coordinate quadratic, so its central differences
    // carry no truncation term and must sit at roundoff for any step
    {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0fd2);
        let x = random_im_state(&mut rng);
        let u = random_im_input(&mut rng);
        let xs = im_scaled_state(&x, &im_params, &im_d);
        let analytic = im_obsv_matrix(&x, &im_params);
        let mut im_worst = 0.0f64;
        for h in [1e-3, 1e-6] {
            let oracle = im_lie_oracle(&xs, u, Vec2::zeros(), &im_params, &im_d, h);
            im_worst = im_worst.max(entrywise_error(&oracle, &analytic));
        }

        let sp = SmParams::<f64>::desk_default(SmVariant::Wrsm);
        let x = random_sm_state(&mut rng, &sp);
        let u = random_sm_input(&mut rng);
        let analytic = sm_obsv_matrix(&x, u, &sp).expect("regular").full;
        let err_sm = |h: f64| {
            let oracle = sm_lie_oracle(&x, u, &sp, h).expect("regular");
            let mut worst = 0.0f64;
            for i in 0..6 {
                for j in 0..5 {
                    worst = worst.max((oracle[(i, j)] - analytic[(i, j)]).abs());
                }
            }
            worst
        };
        let order_sm = (err_sm(1e-3) / err_sm(5e-4)).log2();
        let worst = (order_sm - 2.0).abs().max(if im_worst <= 1e-7 { 0.0 } else { 1.0 });
        results.push(PropertyResult::new(
            "fd_oracle_second_order",
            worst,
            0.3,
            format!("SM observed order {order_sm:.3}; IM exact to roundoff ({im_worst:.2e})"),
        ));
    }

    // 15. IM singular manifold: frozen flux + constant speed kills Δ and rank
    {
        // Δ on the manifold is a catastrophic cancellation, so "zero" is
        // judged against the magnitudes of the inputs that cancel inside
        // the rate substitutions, not against the (vanishing) term sum
        let cancellation_scale = |x: &ImState<f64>| {
            let gamma = crate::models::gamma_mat(im_d.tau_r, x.omega_e);
            let psidot_inputs =
                gamma.mul_vec(&x.psi_r).norm() + x.i_s.scale(im_params.m / im_d.tau_r).norm();
            let pp = im_params.pole_pairs as f64;
            let omegadot_inputs = (1.5 * pp * pp / im_params.inertia * im_params.m
                / im_params.l_r
                * x.psi_r.cross(&x.i_s))
            .abs()
                + (pp / im_params.inertia * x.t_r).abs();
            let prefactor = pp / im_params.inertia * im_params.m * im_params.m
                / (im_params.l_r * im_params.l_r);
            let inv_tau = 1.0 / im_d.tau_r;
            prefactor
                * (inv_tau * omegadot_inputs * x.psi_r.norm_sq()
                    + (x.omega_e * x.omega_e + inv_tau * inv_tau)
                        * psidot_inputs
                        * x.psi_r.norm())
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x517e);
        let mut worst = 0.0f64;
        for _ in 0..n.min(200) {
            let psi = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if psi.norm() < 0.05 {
                continue;
            }
            let omega = rng.gen_range(-500.0..500.0);
            let gamma = crate::models::gamma_mat(im_d.tau_r, omega);
            let i_s = gamma.mul_vec(&psi).scale(im_d.tau_r / im_params.m);
            let pp = im_params.pole_pairs as f64;
            let t_r = 1.5 * pp * im_params.m / im_params.l_r * psi.cross(&i_s);
            let x = ImState { i_s, psi_r: psi, omega_e: omega, t_r };
            worst = worst.max(im_delta(&x, &im_params).abs() / (1e4 * cancellation_scale(&x)));
            let rk = rank_analysis(&im_obsv_matrix(&x, &im_params), 1e-9);
            worst = worst.max(rk.sigma_min / rk.sigma_max);
        }
        results.push(PropertyResult::new(
            "im_singular_manifold",
            worst,
            1e-8,
            "ψ̇ = 0, ω̇ = 0 states: |Δ| ≤ 1e−12·cancellation scale and σ ratio ≤ 1e−8".into(),
        ));
    }

    // 16. SM standstill hierarchy at ω = 0
    {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x57a0);
        // rotating currents keep Δ alive for every variant except the SPMSM
        let mut min_normalized = f64::INFINITY;
        for variant in [SmVariant::Wrsm, SmVariant::NWrsm, SmVariant::Ipmsm, SmVariant::Syrm] {
            let params = SmParams::<f64>::desk_default(variant);
            for _ in 0..n.min(500) {
                let mut x = random_sm_state(&mut rng, &params);
                x.omega = 0.0;
                if x.i.xy().norm() < 1.0 {
                    x.i[0] += 5.0;
                }
                let u = random_sm_input(&mut rng);
                let d = sm_delta(&x, u, &params).expect("regular inductance");
                min_normalized = min_normalized.min(d.specialized.abs() / d.term_scale.max(1e-30));
            }
        }
        let mut spmsm_worst = 0.0f64;
        let params = SmParams::<f64>::desk_default(SmVariant::Spmsm);
        for _ in 0..n.min(500) {
            let mut x = random_sm_state(&mut rng, &params);
            x.omega = 0.0;
            let u = random_sm_input(&mut rng);
            let d = sm_delta(&x, u, &params).expect("regular inductance");
            spmsm_worst = spmsm_worst.max(d.specialized.abs());
        }
        // pass iff the four variants stay observable and the SPMSM is
        // exactly singular at standstill
        let worst = if min_normalized > 1e-8 { spmsm_worst } else { 1.0 };
        results.push(PropertyResult::new(
            "sm_standstill_hierarchy",
            worst,
            0.0,
            format!("min normalized |Δ| of observable variants {min_normalized:.3e}; Δ_SPMSM must be exactly 0"),
        ));
    }

    // 17. steady-state hint residual
    {
        let mut x0 = ImState::zero();
        x0.omega_e = 2.0 * std::f64::consts::PI * 47.0;
        let scenario = Scenario {
            machine: MachineSpec::Im { params: im_params, x0 },
            excitation: ExcitationProfile::sinusoid(25.0, 50.0, 0.3),
            load: TorqueProfile::none(),
            dt: 1e-4,
            duration: 1.0,
            analysis: AnalysisSettings::default(),
        };
        let x = steady_state_hint(&scenario).expect("regular phasor system");
        let omega_s = 2.0 * std::f64::consts::PI * 50.0;
        let u = crate::sim::excite(&scenario.excitation, 0.0).0.xy();
        let f = im_dynamics(&x, u, &im_params);
        let scale = x.to_vec().norm();
        let res = ((f.i_s - x.i_s.perp().scale(omega_s)).norm()
            + (f.psi_r - x.psi_r.perp().scale(omega_s)).norm())
            / scale;
        results.push(PropertyResult::new(
            "steady_state_hint_residual",
            res,
            1e-6,
            String::new(),
        ));
    }

    // 18. 50 Hz steady run: flux magnitude constant within 1% at the tail
    {
        let mut x0 = ImState::zero();
        x0.omega_e = 2.0 * std::f64::consts::PI * 48.0;
        let mut scenario = Scenario {
            machine: MachineSpec::Im { params: im_params, x0 },
            excitation: ExcitationProfile::sinusoid(30.0, 50.0, 0.0),
            load: TorqueProfile::none(),
            dt: 1e-4,
            duration: 1.0,
            analysis: AnalysisSettings::default(),
        };
        let hint = steady_state_hint(&scenario).expect("regular phasor system");
        match &mut scenario.machine {
            MachineSpec::Im { x0, .. } => *x0 = hint,
            _ => unreachable!(),
        }
        let TrajectoryData::Im(traj) = integrate(&scenario).expect("stable") else {
            unreachable!()
        };
        let tail = &traj.samples[traj.samples.len() * 8 / 10..];
        let norms: Vec<f64> = tail.iter().map(|s| s.state.psi_r.norm()).collect();
        let lo = norms.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = norms.iter().cloned().fold(0.0f64, f64::max);
        let spread = (hi - lo) / hi;
        results.push(PropertyResult::new(
            "im_50hz_flux_constancy",
            spread,
            0.01,
            format!("flux magnitude spread over last 20%: {spread:.2e}"),
        ));
    }

    // 19. determinism of integration
    {
        let mut x0 = ImState::zero();
        x0.omega_e = 100.0;
        let scenario = Scenario {
            machine: MachineSpec::Im { params: im_params, x0 },
            excitation: ExcitationProfile::sinusoid(20.0, 35.0, 0.2),
            load: TorqueProfile::constant(0.4),
            dt: 1e-4,
            duration: 0.1,
            analysis: AnalysisSettings::default(),
        };
        let a = integrate(&scenario).expect("stable");
        let b = integrate(&scenario).expect("stable");
        let worst = if a == b { 0.0 } else { 1.0 };
        results.push(PropertyResult::new(
            "integration_determinism",
            worst,
            0.0,
            "bitwise equality of repeated runs".into(),
        ));
    }

    results
}
