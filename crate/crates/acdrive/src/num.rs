//! Generic real scalar used throughout the crate.
//!
//! All model, simulation and observability math is written against [`Real`],
//! so the same code runs in `f32` or `f64`. The CLI and the verification
//! suite instantiate everything at `f64`.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Default + fmt::Debug + fmt::Display + 'static
{
    /// Lift an `f64` literal into this scalar type.
    ///
    /// Panics if the value is not representable, which cannot happen for the
    /// finite constants this crate uses.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("constant representable in scalar type")
    }

    /// 2π.
    fn two_pi() -> Self {
        Self::PI() + Self::PI()
    }

    /// Wrap an angle to `[0, 2π)`.
    fn wrap_angle(self) -> Self {
        let tau = Self::two_pi();
        let w = self - tau * (self / tau).floor();
        // floor rounding can land exactly on 2π for tiny negative inputs
        if w >= tau {
            w - tau
        } else {
            w
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
