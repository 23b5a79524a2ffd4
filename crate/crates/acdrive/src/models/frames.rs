//! Reference-frame rotations between the stationary αβ frame and the rotor
//! dq frame.

use crate::linalg::Vec2;
use crate::num::Real;

/// αβ → dq: rotate by −θ.
pub fn park<T: Real>(v: Vec2<T>, theta: T) -> Vec2<T> {
    let (s, c) = theta.sin_cos();
    Vec2::new(c * v[0] + s * v[1], -s * v[0] + c * v[1])
}

/// dq → αβ: rotate by +θ; exact inverse of [`park`].
pub fn inverse_park<T: Real>(v: Vec2<T>, theta: T) -> Vec2<T> {
    let (s, c) = theta.sin_cos();
    Vec2::new(c * v[0] - s * v[1], s * v[0] + c * v[1])
}
