//! Small fixed-size vectors and matrices over a generic real scalar.
//!
//! Everything in this crate works on matrices no larger than 6×6, so the
//! types are stack-allocated arrays (row-major) with const-generic
//! dimensions. Determinants use LU with partial pivoting; singular values
//! use one-sided Jacobi, which is simple and gives high relative accuracy
//! on small dense matrices.

// index-style loops match the kernels' math; iterators obscure the pivoting
#![allow(clippy::needless_range_loop)]

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::num::Real;

// ── vectors ─────────────────────────────────────────────────────────

/// Fixed-size column vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector<T, const N: usize>(pub [T; N]);

pub type Vec2<T> = Vector<T, 2>;
pub type Vec3<T> = Vector<T, 3>;
pub type Vec5<T> = Vector<T, 5>;
pub type Vec6<T> = Vector<T, 6>;

impl<T: Real, const N: usize> Vector<T, N> {
    pub fn zeros() -> Self {
        Self([T::zero(); N])
    }

    pub fn dot(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for k in 0..N {
            acc += self.0[k] * other.0[k];
        }
        acc
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        let mut out = self;
        for v in out.0.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl<T: Real> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self([x, y])
    }

    /// Quarter-turn rotation `𝕁₂·v = (−v_y, v_x)`.
    pub fn perp(self) -> Self {
        Self([-self.0[1], self.0[0]])
    }

    /// Planar cross product `v_x w_y − v_y w_x`.
    pub fn cross(&self, other: &Self) -> T {
        self.0[0] * other.0[1] - self.0[1] * other.0[0]
    }
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self([x, y, z])
    }

    /// First two components.
    pub fn xy(&self) -> Vec2<T> {
        Vector([self.0[0], self.0[1]])
    }
}

impl<T, const N: usize> From<[T; N]> for Vector<T, N> {
    fn from(a: [T; N]) -> Self {
        Self(a)
    }
}

impl<T, const N: usize> Index<usize> for Vector<T, N> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T, const N: usize> IndexMut<usize> for Vector<T, N> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Real, const N: usize> Add for Vector<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.0[k] += rhs.0[k];
        }
        self
    }
}

impl<T: Real, const N: usize> Sub for Vector<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.0[k] -= rhs.0[k];
        }
        self
    }
}

impl<T: Real, const N: usize> Neg for Vector<T, N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for v in self.0.iter_mut() {
            *v = -*v;
        }
        self
    }
}

impl<T: Real, const N: usize> Mul<T> for Vector<T, N> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

// ── matrices ────────────────────────────────────────────────────────

/// Fixed-size matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<T, const R: usize, const C: usize>(pub [[T; C]; R]);

pub type Mat2<T> = Matrix<T, 2, 2>;
pub type Mat3<T> = Matrix<T, 3, 3>;
pub type Mat5<T> = Matrix<T, 5, 5>;
pub type Mat6<T> = Matrix<T, 6, 6>;
pub type Mat6x5<T> = Matrix<T, 6, 5>;

impl<T: Real, const R: usize, const C: usize> Matrix<T, R, C> {
    pub fn zeros() -> Self {
        Self([[T::zero(); C]; R])
    }

    pub fn from_rows(rows: [[T; C]; R]) -> Self {
        Self(rows)
    }

    pub fn row(&self, i: usize) -> Vector<T, C> {
        Vector(self.0[i])
    }

    pub fn transpose(&self) -> Matrix<T, C, R> {
        let mut out = Matrix::<T, C, R>::zeros();
        for i in 0..R {
            for j in 0..C {
                out.0[j][i] = self.0[i][j];
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &Vector<T, C>) -> Vector<T, R> {
        let mut out = Vector::<T, R>::zeros();
        for i in 0..R {
            let mut acc = T::zero();
            for j in 0..C {
                acc += self.0[i][j] * v.0[j];
            }
            out.0[i] = acc;
        }
        out
    }

    pub fn mul_mat<const K: usize>(&self, rhs: &Matrix<T, C, K>) -> Matrix<T, R, K> {
        let mut out = Matrix::<T, R, K>::zeros();
        for i in 0..R {
            for j in 0..K {
                let mut acc = T::zero();
                for l in 0..C {
                    acc += self.0[i][l] * rhs.0[l][j];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn scale(mut self, s: T) -> Self {
        for row in self.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        self
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Singular values in descending order (`min(R, C)` of them).
    pub fn singular_values(&self) -> Vec<T> {
        if R >= C {
            let cols: Vec<Vec<T>> = (0..C).map(|j| (0..R).map(|i| self.0[i][j]).collect()).collect();
            jacobi_singular_values(cols)
        } else {
            let cols: Vec<Vec<T>> = (0..R).map(|i| (0..C).map(|j| self.0[i][j]).collect()).collect();
            jacobi_singular_values(cols)
        }
    }
}

impl<T: Real, const N: usize> Matrix<T, N, N> {
    pub fn identity() -> Self {
        let mut out = Self::zeros();
        for k in 0..N {
            out.0[k][k] = T::one();
        }
        out
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> T {
        let mut a = self.0;
        let mut sign = T::one();
        for k in 0..N {
            let mut piv = k;
            for i in k + 1..N {
                if a[i][k].abs() > a[piv][k].abs() {
                    piv = i;
                }
            }
            if a[piv][k] == T::zero() {
                return T::zero();
            }
            if piv != k {
                a.swap(piv, k);
                sign = -sign;
            }
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        let mut d = sign;
        for (k, row) in a.iter().enumerate() {
            d *= row[k];
        }
        d
    }
}

impl<T: Real, const R: usize, const C: usize> Add for Matrix<T, R, C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..R {
            for j in 0..C {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<T: Real, const R: usize, const C: usize> Sub for Matrix<T, R, C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..R {
            for j in 0..C {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<T: Real, const R: usize, const C: usize> Neg for Matrix<T, R, C> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for row in self.0.iter_mut() {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
        self
    }
}

impl<T, const R: usize, const C: usize> Index<(usize, usize)> for Matrix<T, R, C> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T, const R: usize, const C: usize> IndexMut<(usize, usize)> for Matrix<T, R, C> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T: Real> Mat2<T> {
    /// Counterclockwise rotation by `angle`.
    pub fn rotation(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self([[c, -s], [s, c]])
    }

    /// π/2 rotation matrix `𝕁₂`.
    pub fn j2() -> Self {
        Self([[T::zero(), -T::one()], [T::one(), T::zero()]])
    }

    /// Analytic inverse; `None` when `|det|` is at or below `floor`.
    pub fn inverse(&self, floor: T) -> Option<Self> {
        let d = self.det();
        if d.abs() <= floor {
            return None;
        }
        let inv = d.recip();
        Some(Self([
            [self.0[1][1] * inv, -self.0[0][1] * inv],
            [-self.0[1][0] * inv, self.0[0][0] * inv],
        ]))
    }
}

impl<T: Real> Mat3<T> {
    /// Analytic (adjugate) inverse; `None` when `|det|` is at or below `floor`.
    pub fn inverse(&self, floor: T) -> Option<Self> {
        let m = &self.0;
        let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
        let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
        let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
        let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
        if det.abs() <= floor {
            return None;
        }
        let inv = det.recip();
        Some(Self([
            [
                c00 * inv,
                (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv,
                (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv,
            ],
            [
                c01 * inv,
                (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv,
                (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv,
            ],
            [
                c02 * inv,
                (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv,
                (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv,
            ],
        ]))
    }
}

// ── singular values (one-sided Jacobi) ──────────────────────────────

/// One-sided Jacobi on a set of columns: rotate column pairs until mutually
/// orthogonal; the singular values are the resulting column norms.
fn jacobi_singular_values<T: Real>(mut cols: Vec<Vec<T>>) -> Vec<T> {
    let n = cols.len();
    if n == 0 {
        return Vec::new();
    }
    let rows = cols[0].len();
    let tol = T::epsilon() * T::of(8.0);
    let two = T::of(2.0);

    for _sweep in 0..64 {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let mut aii = T::zero();
                let mut ajj = T::zero();
                let mut aij = T::zero();
                for k in 0..rows {
                    aii += cols[i][k] * cols[i][k];
                    ajj += cols[j][k] * cols[j][k];
                    aij += cols[i][k] * cols[j][k];
                }
                if aij == T::zero() || aij.abs() <= tol * (aii * ajj).sqrt() {
                    continue;
                }
                let zeta = (ajj - aii) / (two * aij);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = (T::one() + t * t).sqrt().recip();
                let s = c * t;
                for k in 0..rows {
                    let vi = cols[i][k];
                    let vj = cols[j][k];
                    cols[i][k] = c * vi - s * vj;
                    cols[j][k] = s * vi + c * vj;
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<T> = cols
        .iter()
        .map(|c| c.iter().map(|&v| v * v).sum::<T>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    sv
}
