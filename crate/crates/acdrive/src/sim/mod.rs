//! Scenario definition and fixed-step trajectory generation.

mod excite;
mod integrate;
mod steady;

pub use excite::{excite, ExcitationKind, ExcitationProfile, FieldExcitation};
pub use integrate::integrate;
pub use steady::steady_state_hint;

#[cfg(test)]
pub(crate) use integrate::{integrate_im_raw, integrate_sm_raw};

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::models::{ImParams, ImState, SmParams, SmState};
use crate::num::Real;

/// Piecewise-constant resistant-torque profile: a right-continuous step
/// function defined by `(t_start, value)` segments sorted by start time.
#[derive(Clone, Debug, PartialEq)]
pub struct TorqueProfile<T> {
    segments: Vec<(T, T)>,
}

impl<T: Real> TorqueProfile<T> {
    /// Constant torque for all time.
    pub fn constant(value: T) -> Self {
        Self { segments: vec![(T::zero(), value)] }
    }

    /// Empty profile: the machine's own initial torque (IM) or zero (SM).
    pub fn none() -> Self {
        Self { segments: Vec::new() }
    }

    pub fn from_segments(segments: Vec<(T, T)>) -> Result<Self> {
        if segments.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidParameter("torque profile values must be finite".into()));
        }
        for w in segments.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidParameter(
                    "torque profile segments must have strictly increasing start times".into(),
                ));
            }
        }
        Ok(Self { segments })
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segments(&self) -> &[(T, T)] {
        &self.segments
    }

    /// Torque at time `t`; before the first segment the first value applies,
    /// with an empty profile the fallback applies.
    pub fn value_or(&self, t: T, fallback: T) -> T {
        if self.segments.is_empty() {
            return fallback;
        }
        let mut v = self.segments[0].1;
        for &(start, value) in &self.segments {
            if t >= start {
                v = value;
            } else {
                break;
            }
        }
        v
    }
}

/// Machine choice with its parameters and initial state.
#[derive(Clone, Debug, PartialEq)]
pub enum MachineSpec<T> {
    Im { params: ImParams<T>, x0: ImState<T> },
    Sm { params: SmParams<T>, x0: SmState<T> },
}

/// Settings consumed by the observability analysis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisSettings<T> {
    /// Relative SVD rank tolerance.
    pub rank_tol: T,
    /// Whether to evaluate the finite-difference oracle per sample.
    pub oracle: bool,
    /// Singular-sample fraction above which `--strict` fails.
    pub strict_fraction: T,
}

impl<T: Real> Default for AnalysisSettings<T> {
    fn default() -> Self {
        Self {
            rank_tol: T::of(1e-9),
            oracle: true,
            strict_fraction: T::of(0.01),
        }
    }
}

/// A complete simulation request.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<T> {
    pub machine: MachineSpec<T>,
    pub excitation: ExcitationProfile<T>,
    pub load: TorqueProfile<T>,
    /// Fixed integration step (s).
    pub dt: T,
    /// Horizon (s).
    pub duration: T,
    pub analysis: AnalysisSettings<T>,
}

impl<T: Real> Scenario<T> {
    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= T::zero() {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {}", self.dt)));
        }
        if !self.duration.is_finite() || self.duration < self.dt {
            return Err(Error::InvalidParameter(format!(
                "duration must be >= dt, got duration {} with dt {}",
                self.duration, self.dt
            )));
        }
        self.excitation.validate()?;
        match &self.machine {
            MachineSpec::Im { params, x0 } => {
                params.validate()?;
                if !x0.is_finite() {
                    return Err(Error::InvalidParameter("initial IM state must be finite".into()));
                }
            }
            MachineSpec::Sm { params, x0 } => {
                params.validate()?;
                if !x0.is_finite() {
                    return Err(Error::InvalidParameter("initial SM state must be finite".into()));
                }
                if let Some(pin) = params.pinned_field_current() {
                    if x0.i[2] != pin {
                        return Err(Error::InvalidParameter(format!(
                            "i_f is pinned to {pin} for {}, got {}",
                            params.variant, x0.i[2]
                        )));
                    }
                }
            }
        }
        if !self.analysis.rank_tol.is_finite() || self.analysis.rank_tol <= T::zero() {
            return Err(Error::InvalidParameter("rank_tol must be > 0".into()));
        }
        Ok(())
    }

    /// Number of integration steps (`duration/dt`, rounded).
    pub fn n_steps(&self) -> usize {
        (self.duration / self.dt)
            .round()
            .to_usize()
            .expect("step count fits usize")
    }
}

/// One trajectory sample: grid time, state, input and analytic input rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample<T, S> {
    pub t: T,
    pub state: S,
    pub u: Vec3<T>,
    pub u_dot: Vec3<T>,
}

/// Uniform-grid trajectory; sample `k` sits at `t = k·dt` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T, S> {
    pub dt: T,
    pub samples: Vec<Sample<T, S>>,
}

/// Machine-tagged trajectory.
#[derive(Clone, Debug, PartialEq)]
pub enum TrajectoryData<T> {
    Im(Trajectory<T, ImState<T>>),
    Sm(Trajectory<T, SmState<T>>),
}

impl<T: Real> TrajectoryData<T> {
    pub fn len(&self) -> usize {
        match self {
            TrajectoryData::Im(t) => t.samples.len(),
            TrajectoryData::Sm(t) => t.samples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
