//! Synchronous machines: WRSM and its reductions (N-WRSM, IPMSM, SPMSM, SyRM).
//!
//! The wound-rotor machine is the general case; permanent-magnet and
//! reluctance variants are represented as constrained WRSM states with the
//! field current pinned to ψ_r/M_f (PMSM) or 0 (SyRM) and `di_f/dt = 0`
//! enforced in the dynamics.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat3, Vec2, Vec3, Vec5};
use crate::num::Real;

/// Synchronous machine family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SmVariant {
    /// Salient wound-rotor machine (the general case).
    Wrsm,
    /// Non-salient wound-rotor machine (L_2 = 0).
    NWrsm,
    /// Interior permanent-magnet machine (salient).
    Ipmsm,
    /// Surface-mounted permanent-magnet machine (non-salient, L_2 = 0).
    Spmsm,
    /// Synchronous reluctance machine (ψ_r = 0).
    Syrm,
}

impl SmVariant {
    pub const ALL: [SmVariant; 5] = [
        SmVariant::Wrsm,
        SmVariant::NWrsm,
        SmVariant::Ipmsm,
        SmVariant::Spmsm,
        SmVariant::Syrm,
    ];

    /// True for machines with a physical field winding (and v_f input).
    pub fn has_field_winding(&self) -> bool {
        matches!(self, SmVariant::Wrsm | SmVariant::NWrsm)
    }

    /// True when the field current is pinned (PMSM and SyRM reductions).
    pub fn is_pinned(&self) -> bool {
        !self.has_field_winding()
    }
}

impl fmt::Display for SmVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SmVariant::Wrsm => "wrsm",
            SmVariant::NWrsm => "n-wrsm",
            SmVariant::Ipmsm => "ipmsm",
            SmVariant::Spmsm => "spmsm",
            SmVariant::Syrm => "syrm",
        };
        f.write_str(s)
    }
}

impl FromStr for SmVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "wrsm" => Ok(SmVariant::Wrsm),
            "n-wrsm" | "nwrsm" => Ok(SmVariant::NWrsm),
            "ipmsm" => Ok(SmVariant::Ipmsm),
            "spmsm" => Ok(SmVariant::Spmsm),
            "syrm" => Ok(SmVariant::Syrm),
            other => Err(format!("unknown synchronous machine variant: {other}")),
        }
    }
}

/// Synchronous machine constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmParams<T> {
    /// Stator resistance R_s (Ω).
    pub r_s: T,
    /// Field resistance R_f (Ω); unused by PMSM/SyRM.
    pub r_f: T,
    /// Mean stator self-inductance L_0 (H).
    pub l0: T,
    /// Saliency inductance L_2 (H); 0 for non-salient machines.
    pub l2: T,
    /// Stator–field mutual inductance M_f (H).
    pub m_f: T,
    /// Field inductance L_f (H); unused by PMSM/SyRM.
    pub l_f: T,
    /// Permanent-magnet flux ψ_r (Wb); PMSM only, 0 for SyRM.
    pub psi_r: T,
    /// Pole-pair count.
    pub pole_pairs: u32,
    /// Rotor plus load inertia J (kg·m²).
    pub inertia: T,
    pub variant: SmVariant,
}

impl<T: Real> SmParams<T> {
    /// Desk-scale default set, adjusted to the variant constraints
    /// (L_2 = 0 for non-salient machines, ψ_r = 0 for the SyRM).
    pub fn desk_default(variant: SmVariant) -> Self {
        let non_salient = matches!(variant, SmVariant::NWrsm | SmVariant::Spmsm);
        Self {
            r_s: T::of(0.5),
            r_f: T::of(2.0),
            l0: T::of(0.010),
            l2: if non_salient { T::zero() } else { T::of(0.002) },
            m_f: T::of(0.050),
            l_f: T::of(0.5),
            psi_r: if variant == SmVariant::Syrm { T::zero() } else { T::of(0.1) },
            pole_pairs: 3,
            inertia: T::of(0.005),
            variant,
        }
    }

    /// L_d = L_0 + L_2.
    pub fn l_d(&self) -> T {
        self.l0 + self.l2
    }

    /// L_q = L_0 − L_2.
    pub fn l_q(&self) -> T {
        self.l0 - self.l2
    }

    /// Saliency L_δ = L_d − L_q = 2·L_2.
    pub fn l_delta(&self) -> T {
        self.l2 + self.l2
    }

    /// L_D: `L_d − M_f²/L_f` with a field winding, `L_d` otherwise.
    pub fn l_dd(&self) -> T {
        if self.variant.has_field_winding() {
            self.l_d() - self.m_f * self.m_f / self.l_f
        } else {
            self.l_d()
        }
    }

    /// L_Δ: `L_δ − M_f²/L_f` with a field winding, `L_δ` otherwise.
    pub fn l_ddelta(&self) -> T {
        if self.variant.has_field_winding() {
            self.l_delta() - self.m_f * self.m_f / self.l_f
        } else {
            self.l_delta()
        }
    }

    /// Constant field current enforced on PMSM (ψ_r/M_f) and SyRM (0);
    /// `None` for wound-rotor machines whose field current is a free state.
    pub fn pinned_field_current(&self) -> Option<T> {
        match self.variant {
            SmVariant::Wrsm | SmVariant::NWrsm => None,
            SmVariant::Ipmsm | SmVariant::Spmsm => Some(self.psi_r / self.m_f),
            SmVariant::Syrm => Some(T::zero()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.r_s, "r_s"),
            (self.r_f, "r_f"),
            (self.l0, "l0"),
            (self.l2, "l2"),
            (self.m_f, "m_f"),
            (self.l_f, "l_f"),
            (self.psi_r, "psi_r"),
            (self.inertia, "inertia"),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        for (v, name) in [(self.r_s, "r_s"), (self.inertia, "inertia"), (self.m_f, "m_f")] {
            if v <= T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.variant.has_field_winding() {
            for (v, name) in [(self.r_f, "r_f"), (self.l_f, "l_f")] {
                if v <= T::zero() {
                    return Err(Error::InvalidParameter(format!(
                        "{name} must be strictly positive, got {v}"
                    )));
                }
            }
        }
        if self.l_d() <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "l_d = l0 + l2 must be positive, got {}",
                self.l_d()
            )));
        }
        if self.l_q() <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "l_q = l0 - l2 must be positive, got {}",
                self.l_q()
            )));
        }
        if self.variant.has_field_winding() && self.l_dd() <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "l_d - m_f^2/l_f must be positive, got {}",
                self.l_dd()
            )));
        }
        match self.variant {
            SmVariant::NWrsm | SmVariant::Spmsm if self.l2 != T::zero() => {
                return Err(Error::InvalidParameter(format!(
                    "{} requires l2 = 0 (non-salient rotor), got {}",
                    self.variant, self.l2
                )));
            }
            SmVariant::Syrm if self.psi_r != T::zero() => {
                return Err(Error::InvalidParameter(format!(
                    "syrm requires psi_r = 0, got {}",
                    self.psi_r
                )));
            }
            _ => {}
        }
        if self.pole_pairs == 0 {
            return Err(Error::InvalidParameter("pole_pairs must be >= 1".into()));
        }
        Ok(())
    }
}

/// Synchronous machine state in the stationary αβ frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmState<T> {
    /// Currents (i_α, i_β, i_f) (A).
    pub i: Vec3<T>,
    /// Electrical rotor speed ω (rad/s).
    pub omega: T,
    /// Electrical rotor position θ (rad).
    pub theta: T,
}

impl<T: Real> SmState<T> {
    pub fn zero() -> Self {
        Self {
            i: Vec3::zeros(),
            omega: T::zero(),
            theta: T::zero(),
        }
    }

    pub fn to_vec(&self) -> Vec5<T> {
        Vec5::from([self.i[0], self.i[1], self.i[2], self.omega, self.theta])
    }

    pub fn from_vec(v: &Vec5<T>) -> Self {
        Self {
            i: Vec3::new(v[0], v[1], v[2]),
            omega: v[3],
            theta: v[4],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_vec().is_finite()
    }
}

/// Position-dependent inductance matrix 𝔏(θ) and its first two analytic
/// partial derivatives with respect to θ.
///
/// Errors with a singular-inductance diagnosis when |det 𝔏| falls at or
/// below `1e−12·‖𝔏‖³` (max-abs norm), which signals nonphysical parameters.
pub fn sm_inductance<T: Real>(theta: T, params: &SmParams<T>) -> Result<(Mat3<T>, Mat3<T>, Mat3<T>)> {
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (theta + theta).sin_cos();
    let (l0, l2, mf, lf) = (params.l0, params.l2, params.m_f, params.l_f);
    let two = T::of(2.0);
    let four = T::of(4.0);

    let l = Mat3::from_rows([
        [l0 + l2 * c2, l2 * s2, mf * c],
        [l2 * s2, l0 - l2 * c2, mf * s],
        [mf * c, mf * s, lf],
    ]);
    let lp = Mat3::from_rows([
        [-two * l2 * s2, two * l2 * c2, -mf * s],
        [two * l2 * c2, two * l2 * s2, mf * c],
        [-mf * s, mf * c, T::zero()],
    ]);
    let lpp = Mat3::from_rows([
        [-four * l2 * c2, -four * l2 * s2, -mf * c],
        [-four * l2 * s2, four * l2 * c2, -mf * s],
        [-mf * c, -mf * s, T::zero()],
    ]);

    let det = l.det();
    let guard = inductance_guard(&l);
    if det.abs() <= guard {
        return Err(Error::SingularInductance {
            det: det.to_f64().unwrap_or(0.0),
            guard: guard.to_f64().unwrap_or(0.0),
        });
    }
    Ok((l, lp, lpp))
}

fn inductance_guard<T: Real>(l: &Mat3<T>) -> T {
    let n = l.max_abs();
    T::of(1e-12) * n * n * n
}

pub(crate) fn invert_inductance<T: Real>(l: &Mat3<T>) -> Result<Mat3<T>> {
    let guard = inductance_guard(l);
    l.inverse(guard).ok_or(Error::SingularInductance {
        det: l.det().to_f64().unwrap_or(0.0),
        guard: guard.to_f64().unwrap_or(0.0),
    })
}

/// Stator-only blocks of 𝔏 used by the constrained PMSM/SyRM dynamics:
/// the 2×2 stator inductance with its θ-derivatives and the stator–field
/// coupling column m(θ) = M_f·(cosθ, sinθ)ᵀ with its θ-derivatives.
pub(crate) struct StatorBlocks<T> {
    pub lss: Mat2<T>,
    pub lss_p: Mat2<T>,
    pub lss_pp: Mat2<T>,
    pub m_p: Vec2<T>,
    pub m_pp: Vec2<T>,
}

pub(crate) fn stator_blocks<T: Real>(theta: T, params: &SmParams<T>) -> StatorBlocks<T> {
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (theta + theta).sin_cos();
    let (l0, l2, mf) = (params.l0, params.l2, params.m_f);
    let two = T::of(2.0);
    let four = T::of(4.0);
    StatorBlocks {
        lss: Mat2::from_rows([[l0 + l2 * c2, l2 * s2], [l2 * s2, l0 - l2 * c2]]),
        lss_p: Mat2::from_rows([[-two * l2 * s2, two * l2 * c2], [two * l2 * c2, two * l2 * s2]]),
        lss_pp: Mat2::from_rows([
            [-four * l2 * c2, -four * l2 * s2],
            [-four * l2 * s2, four * l2 * c2],
        ]),
        m_p: Vec2::new(-mf * s, mf * c),
        m_pp: Vec2::new(-mf * c, -mf * s),
    }
}

pub(crate) fn invert_stator<T: Real>(lss: &Mat2<T>) -> Result<Mat2<T>> {
    let n = lss.max_abs();
    let guard = T::of(1e-12) * n * n;
    lss.inverse(guard).ok_or(Error::SingularInductance {
        det: lss.det().to_f64().unwrap_or(0.0),
        guard: guard.to_f64().unwrap_or(0.0),
    })
}

/// Motor torque T_m.
pub fn sm_torque<T: Real>(x: &SmState<T>, params: &SmParams<T>) -> T {
    let (s, c) = x.theta.sin_cos();
    let (s2, c2) = (x.theta + x.theta).sin_cos();
    let (ia, ib, if_) = (x.i[0], x.i[1], x.i[2]);
    let pp = T::from_u32(params.pole_pairs).expect("pole pair count fits scalar");
    let three_half = T::of(1.5);
    let two = T::of(2.0);
    three_half * pp * params.m_f * if_ * (ib * c - ia * s)
        - three_half * pp * params.l2 * ((ia * ia - ib * ib) * s2 - two * ia * ib * c2)
}

/// Current derivative 𝓘̇ under input 𝒱 = (v_α, v_β, v_f).
///
/// Wound-rotor machines solve the full 3×3 system
/// `𝔏𝓘̇ = 𝒱 − (ℜ + 𝔏′ω)𝓘`; PMSM and SyRM solve the pinned stator system
/// with `di_f/dt = 0` (the v_f channel is ignored for them).
pub fn sm_current_dynamics<T: Real>(
    x: &SmState<T>,
    v: Vec3<T>,
    params: &SmParams<T>,
) -> Result<Vec3<T>> {
    if params.variant.has_field_winding() {
        let (l, lp, _) = sm_inductance(x.theta, params)?;
        let l_inv = invert_inductance(&l)?;
        let mut rhs = v;
        let resist = [params.r_s, params.r_s, params.r_f];
        let lp_i = lp.mul_vec(&x.i);
        for k in 0..3 {
            rhs[k] = rhs[k] - resist[k] * x.i[k] - x.omega * lp_i[k];
        }
        Ok(l_inv.mul_vec(&rhs))
    } else {
        let blocks = stator_blocks(x.theta, params);
        let lss_inv = invert_stator(&blocks.lss)?;
        let i_s = x.i.xy();
        let rhs = v.xy()
            - i_s.scale(params.r_s)
            - (blocks.lss_p.mul_vec(&i_s) + blocks.m_p.scale(x.i[2])).scale(x.omega);
        let di = lss_inv.mul_vec(&rhs);
        Ok(Vec3::new(di[0], di[1], T::zero()))
    }
}

/// Continuous-time dynamics ẋ = f(x, 𝒱, T_r) of the synchronous machine.
/// T_r is the scenario-supplied resistant torque.
pub fn sm_dynamics<T: Real>(
    x: &SmState<T>,
    v: Vec3<T>,
    t_r: T,
    params: &SmParams<T>,
) -> Result<SmState<T>> {
    let di = sm_current_dynamics(x, v, params)?;
    let pp = T::from_u32(params.pole_pairs).expect("pole pair count fits scalar");
    let domega = pp / params.inertia * (sm_torque(x, params) - t_r);
    Ok(SmState {
        i: di,
        omega: domega,
        theta: x.omega,
    })
}
