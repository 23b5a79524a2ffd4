//! Pointwise observability analysis of a simulated trajectory.

use crate::error::{Error, Result};
use crate::models::ImDerived;
use crate::num::Real;
use crate::obsv::im::{im_delta_terms, im_geometric_margin, im_obsv_matrix_with, scaled_state6};
use crate::obsv::oracle::{im_lie_oracle, sm_lie_oracle, DEFAULT_FD_STEP};
use crate::obsv::rank_analysis;
use crate::obsv::sm::{sm_delta, sm_geometric_margin, sm_obsv_matrix};
use crate::linalg::Mat5;
use crate::sim::{MachineSpec, Scenario, TrajectoryData};

/// Per-sample observability record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleReport<T> {
    pub t: T,
    /// Closed-form determinant (Δ_IM or the variant's Δ).
    pub delta_closed: T,
    /// Sum of the absolute additive terms of the closed form; the scale
    /// against which a vanishing Δ is judged.
    pub delta_scale: T,
    /// Determinant of the finite-difference oracle matrix, when enabled.
    pub delta_numeric: Option<T>,
    pub sigma_min: T,
    pub sigma_max: T,
    pub rank: usize,
    /// Geometric condition, left side (ω_s for the IM, ω for the SM).
    pub margin_lhs: Option<T>,
    /// Geometric condition, right side (`d/dt arctan(τ_rω_e)` for the IM,
    /// `dθ_O/dt` for the SM).
    pub margin_rhs: Option<T>,
    /// SM approximation factor; absent for the IM.
    pub approx_factor: Option<T>,
    /// `σ_min > rank_tol·σ_max`.
    pub observable: bool,
}

/// Horizon-level statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportSummary<T> {
    pub observable_fraction: T,
    pub min_sigma_ratio: T,
    pub min_abs_delta: T,
    pub max_abs_delta: T,
    /// Maximal runs of consecutive non-observable samples, as time spans.
    pub singular_intervals: Vec<(T, T)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObservabilityReport<T> {
    pub samples: Vec<SampleReport<T>>,
    pub summary: ReportSummary<T>,
}

/// Evaluate determinants, rank and geometric margins at every sample of a
/// trajectory produced from `scenario`.
pub fn analyze_trajectory<T: Real>(
    traj: &TrajectoryData<T>,
    scenario: &Scenario<T>,
) -> Result<ObservabilityReport<T>> {
    let settings = scenario.analysis;
    let h = T::of(DEFAULT_FD_STEP);
    let mut samples = Vec::with_capacity(traj.len());

    match (traj, &scenario.machine) {
        (TrajectoryData::Im(traj), MachineSpec::Im { params, .. }) => {
            let derived = ImDerived::new_unchecked(params);
            for s in &traj.samples {
                let matrix = im_obsv_matrix_with(&s.state, params, &derived);
                let rank = rank_analysis(&matrix, settings.rank_tol);
                let (t1, t2) = im_delta_terms(&s.state, params);
                let delta_numeric = settings.oracle.then(|| {
                    let xs = scaled_state6(&s.state, params, &derived);
                    im_lie_oracle(&xs, s.u.xy(), s.u_dot.xy(), params, &derived, h).det()
                });
                let margin = im_geometric_margin(&s.state, params).ok();
                samples.push(SampleReport {
                    t: s.t,
                    delta_closed: t1 - t2,
                    delta_scale: t1.abs() + t2.abs(),
                    delta_numeric,
                    sigma_min: rank.sigma_min,
                    sigma_max: rank.sigma_max,
                    rank: rank.rank,
                    margin_lhs: margin.map(|m| m.omega_s),
                    margin_rhs: margin.map(|m| m.rhs),
                    approx_factor: None,
                    observable: rank.sigma_min > settings.rank_tol * rank.sigma_max,
                });
            }
        }
        (TrajectoryData::Sm(traj), MachineSpec::Sm { params, .. }) => {
            for (k, s) in traj.samples.iter().enumerate() {
                let matrix = sm_obsv_matrix(&s.state, s.u, params)?;
                let rank = rank_analysis(&matrix.first_five, settings.rank_tol);
                let delta = sm_delta(&s.state, s.u, params)?;
                let delta_numeric = if settings.oracle {
                    let oracle = sm_lie_oracle(&s.state, s.u, params, h)?;
                    let mut five = Mat5::zeros();
                    for r in 0..5 {
                        for c in 0..5 {
                            five[(r, c)] = oracle[(r, c)];
                        }
                    }
                    Some(five.det())
                } else {
                    None
                };
                let margin = if k > 0 && k + 1 < traj.samples.len() {
                    match sm_geometric_margin(traj, k, params) {
                        Ok(m) => Some(m),
                        Err(Error::UndefinedAngle { .. }) => None,
                        Err(e) => return Err(e),
                    }
                } else {
                    None
                };
                samples.push(SampleReport {
                    t: s.t,
                    delta_closed: delta.specialized,
                    delta_scale: delta.term_scale,
                    delta_numeric,
                    sigma_min: rank.sigma_min,
                    sigma_max: rank.sigma_max,
                    rank: rank.rank,
                    margin_lhs: margin.map(|m| m.omega),
                    margin_rhs: margin.map(|m| m.theta_o_rate),
                    approx_factor: margin.map(|m| m.approx_factor),
                    observable: rank.sigma_min > settings.rank_tol * rank.sigma_max,
                });
            }
        }
        _ => {
            return Err(Error::Mismatch(
                "trajectory machine does not match scenario machine".into(),
            ))
        }
    }

    let summary = summarize(&samples);
    Ok(ObservabilityReport { samples, summary })
}

fn summarize<T: Real>(samples: &[SampleReport<T>]) -> ReportSummary<T> {
    let n = samples.len();
    let observable = samples.iter().filter(|s| s.observable).count();
    let mut min_ratio = T::infinity();
    let mut min_abs = T::infinity();
    let mut max_abs = T::zero();
    for s in samples {
        let ratio = if s.sigma_max > T::zero() {
            s.sigma_min / s.sigma_max
        } else {
            T::zero()
        };
        min_ratio = min_ratio.min(ratio);
        min_abs = min_abs.min(s.delta_closed.abs());
        max_abs = max_abs.max(s.delta_closed.abs());
    }

    let mut intervals = Vec::new();
    let mut run_start: Option<T> = None;
    for s in samples {
        match (s.observable, run_start) {
            (false, None) => run_start = Some(s.t),
            (true, Some(start)) => {
                intervals.push((start, s.t));
                run_start = None;
            }
            _ => {}
        }
    }
    if let (Some(start), Some(last)) = (run_start, samples.last()) {
        intervals.push((start, last.t));
    }

    ReportSummary {
        observable_fraction: if n == 0 {
            T::zero()
        } else {
            T::from_usize(observable).expect("sample count fits scalar")
                / T::from_usize(n).expect("sample count fits scalar")
        },
        min_sigma_ratio: if min_ratio.is_infinite() { T::zero() } else { min_ratio },
        min_abs_delta: if min_abs.is_infinite() { T::zero() } else { min_abs },
        max_abs_delta: max_abs,
        singular_intervals: intervals,
    }
}
