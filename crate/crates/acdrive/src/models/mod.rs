//! Machine parameter sets, reference-frame transforms and continuous-time
//! dynamics for the induction machine and the synchronous machine family.

mod frames;
mod im;
mod sm;

pub use frames::{inverse_park, park};
pub use im::{
    im_derived, im_dynamics, im_dynamics_with, im_scale, im_unscale, ImDerived, ImParams, ImState,
};
pub use sm::{
    sm_current_dynamics, sm_dynamics, sm_inductance, sm_torque, SmParams, SmState, SmVariant,
};

pub(crate) use im::gamma_mat;
pub(crate) use sm::{invert_inductance, invert_stator, stator_blocks};
