//! Numerical rank via singular values.

use crate::linalg::Matrix;
use crate::num::Real;

/// Default relative rank tolerance: the double-precision SVD noise floor
/// with safety margin.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankAnalysis<T> {
    /// Count of singular values above `rel_tol·σ_max`.
    pub rank: usize,
    /// Smallest singular value.
    pub sigma_min: T,
    /// Largest singular value.
    pub sigma_max: T,
    /// `σ_max/σ_min`, infinite when σ_min = 0.
    pub condition: T,
}

/// Singular-value rank analysis of a small dense matrix.
pub fn rank_analysis<T: Real, const R: usize, const C: usize>(
    m: &Matrix<T, R, C>,
    rel_tol: T,
) -> RankAnalysis<T> {
    let sv = m.singular_values();
    let sigma_max = sv.first().copied().unwrap_or_else(T::zero);
    let sigma_min = sv.last().copied().unwrap_or_else(T::zero);
    let rank = sv.iter().filter(|s| **s > rel_tol * sigma_max).count();
    let condition = if sigma_min > T::zero() {
        sigma_max / sigma_min
    } else {
        T::infinity()
    };
    RankAnalysis {
        rank,
        sigma_min,
        sigma_max,
        condition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Mat2, Mat6};

    #[test]
    fn identity_full_rank() {
        let r = rank_analysis(&Mat6::<f64>::identity(), 1e-9);
        assert_eq!(r.rank, 6);
        assert_eq!(r.sigma_min, 1.0);
        assert_eq!(r.sigma_max, 1.0);
        assert_eq!(r.condition, 1.0);
    }

    #[test]
    fn zero_matrix_rank_zero() {
        let r = rank_analysis(&Mat6::<f64>::zeros(), 1e-9);
        assert_eq!(r.rank, 0);
        assert_eq!(r.sigma_max, 0.0);
        assert!(r.condition.is_infinite());
    }

    #[test]
    fn threshold_semantics() {
        let m = Mat2::from_rows([[1.0, 0.0], [0.0, 1e-12]]);
        assert_eq!(rank_analysis(&m, 1e-9).rank, 1);
        assert_eq!(rank_analysis(&m, 1e-13).rank, 2);
    }

    #[test]
    fn rank_is_scale_covariant() {
        let m = Mat2::from_rows([[2.0, 1.0], [4.0, 2.0]]); // rank 1
        for c in [1.0, -3.0, 1e-6, 1e6] {
            assert_eq!(rank_analysis(&m.scale(c), 1e-9).rank, 1, "scale {c}");
        }
    }

    #[test]
    fn rank_is_permutation_invariant() {
        use crate::linalg::Mat3;
        let m = Mat3::<f64>::from_rows([[2.0, -1.0, 0.5], [0.0, 3.0, 1.0], [4.0, -2.0, 1.0]]);
        let swapped = Mat3::from_rows([m.0[2], m.0[0], m.0[1]]);
        let a = rank_analysis(&m, 1e-9);
        let b = rank_analysis(&swapped, 1e-9);
        assert_eq!(a.rank, b.rank);
        assert!((a.sigma_min - b.sigma_min).abs() <= 1e-12 * a.sigma_max);
        assert!((a.sigma_max - b.sigma_max).abs() <= 1e-12 * a.sigma_max);
    }
}
