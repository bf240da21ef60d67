//! Small dense vector helpers and the symmetric-operator abstraction used by
//! the subproblem solver.

use nalgebra::{DMatrix, DVector, DVectorView, DVectorViewMut};

/// A symmetric linear operator `v -> Bv`.
///
/// The subproblem solver only ever needs products with `B`, so dense matrices,
/// diagonal test operators and the quasi-Newton approximation share this trait.
pub trait SymOperator {
    fn dim(&self) -> usize;

    /// Writes `B v` into `out`. Both slices have length [`SymOperator::dim`].
    fn apply(&self, v: &[f64], out: &mut [f64]);

    fn apply_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply(v, &mut out);
        out
    }
}

impl SymOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = self.nrows();
        let v = DVectorView::from_slice(v, n);
        let mut out = DVectorViewMut::from_slice(out, n);
        out.gemv(1.0, self, &v, 0.0);
    }
}

/// Diagonal operator, handy for tests and cheap models.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonal(pub Vec<f64>);

impl SymOperator for Diagonal {
    fn dim(&self) -> usize {
        self.0.len()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for ((o, d), x) in out.iter_mut().zip(&self.0).zip(v) {
            *o = d * x;
        }
    }
}

impl<T: SymOperator + ?Sized> SymOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        (**self).apply(v, out)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Spectral norm of a symmetric matrix, via a full eigendecomposition.
///
/// O(n^3); meant for diagnostics and invariant checks on small problems.
pub fn sym_spectral_norm(b: &DMatrix<f64>) -> f64 {
    let eig = b.clone().symmetric_eigen();
    eig.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
}

pub fn to_dvector(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_diagonal_agree() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, -1.0, 0.5]));
        let d = Diagonal(vec![2.0, -1.0, 0.5]);
        let v = [1.0, 2.0, 3.0];
        assert_eq!(m.apply_vec(&v), d.apply_vec(&v));
    }

    #[test]
    fn spectral_norm_of_indefinite_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, -5.0]));
        assert!((sym_spectral_norm(&m) - 5.0).abs() < 1e-14);
    }
}
