//! Dense symmetric positive-definite solves.

use faer::linalg::solvers::{Llt, Solve};
use faer::{Mat, Side};

/// Cholesky factor of a symmetric matrix.
#[derive(Debug, Clone)]
pub(crate) struct Cholesky {
    llt: Llt<f64>,
}

/// A pivot fell at or below the singularity threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NotPositiveDefinite {
    pub column: usize,
}

/// Pivots at or below this fraction of the largest diagonal entry count as
/// zero.
const RELATIVE_PIVOT_TOLERANCE: f64 = 1e-10;

impl Cholesky {
    /// Factors with pivots at or below `RELATIVE_PIVOT_TOLERANCE` times the
    /// largest diagonal entry treated as zero.
    pub fn factor(a: &[f64], n: usize) -> Result<Self, NotPositiveDefinite> {
        let scale = (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max);
        Self::factor_with_floor(a, n, RELATIVE_PIVOT_TOLERANCE * scale.max(f64::MIN_POSITIVE))
    }

    /// Factors the row-major `n×n` matrix `a`, failing on the first pivot
    /// (squared diagonal entry of the factor) at or below `floor`.
    pub fn factor_with_floor(a: &[f64], n: usize, floor: f64) -> Result<Self, NotPositiveDefinite> {
        assert_eq!(a.len(), n * n);
        let m = Mat::from_fn(n, n, |i, j| a[i * n + j]);
        let llt = Llt::new(m.as_ref(), Side::Lower).map_err(|e| match e {
            faer::linalg::cholesky::llt::factor::LltError::NonPositivePivot { index } => {
                NotPositiveDefinite { column: index }
            }
        })?;
        let l = llt.L();
        match (0..n).find(|&j| !(l[(j, j)] * l[(j, j)] > floor)) {
            Some(column) => Err(NotPositiveDefinite { column }),
            None => Ok(Cholesky { llt }),
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let rhs = Mat::from_fn(b.len(), 1, |i, _| b[i]);
        let x = self.llt.solve(&rhs);
        (0..b.len()).map(|i| x[(i, 0)]).collect()
    }
}
