//! Dense modified-BFGS Hessian approximation.
//!
//! The curvature pair is corrected before the usual BFGS rank-two update:
//!
//! ```text
//! r    = max(0, -y's / ||s||^2) + 1e-6
//! ybar = y + r s                      so that ybar's >= 1e-6 ||s||^2
//! B+   = B - (Bs)(Bs)' / s'Bs + ybar ybar' / ybar's
//! ```
//!
//! `B+` therefore stays symmetric positive definite on nonconvex problems and
//! satisfies the secant equation `B+ s = ybar`. When the Frobenius norm would
//! exceed `norm_cap`, `B` is reset to the identity instead.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::linalg::{dot, norm, SymOperator};

pub const CURVATURE_SHIFT: f64 = 1e-6;
pub const DEFAULT_NORM_CAP: f64 = 1e8;
const SKIP_FACTOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HessianError {
    #[error("Hessian approximation needs dimension at least 1")]
    EmptyDimension,
}

/// What [`HessianApprox::mbfgs_update`] did with a curvature pair.
#[derive(Debug, Clone, PartialEq)]
pub enum UpdateOutcome {
    /// Rank-two update applied; carries the corrected gradient difference
    /// and the shift `r` in `ybar = y + r s`.
    Applied { ybar: Vec<f64>, shift: f64 },
    /// Step too short relative to the iterate; `B` untouched.
    SkippedShortStep,
    /// Update would have broken the norm cap; `B` reset to the identity.
    Reset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HessianApprox {
    b: DMatrix<f64>,
    norm_cap: f64,
    updates_applied: usize,
    updates_skipped: usize,
}

impl HessianApprox {
    pub fn identity(n: usize) -> Result<Self, HessianError> {
        Self::with_norm_cap(n, DEFAULT_NORM_CAP)
    }

    pub fn with_norm_cap(n: usize, norm_cap: f64) -> Result<Self, HessianError> {
        if n == 0 {
            return Err(HessianError::EmptyDimension);
        }
        assert!(norm_cap > (n as f64).sqrt(), "norm cap must admit the identity");
        Ok(HessianApprox {
            b: DMatrix::identity(n, n),
            norm_cap,
            updates_applied: 0,
            updates_skipped: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.b.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn norm_cap(&self) -> f64 {
        self.norm_cap
    }

    pub fn updates_applied(&self) -> usize {
        self.updates_applied
    }

    pub fn updates_skipped(&self) -> usize {
        self.updates_skipped
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.b.norm()
    }

    /// Applies the MBFGS update for step `s` and gradient change `y`.
    ///
    /// `x_norm` is the norm of the new iterate; steps with
    /// `||s|| <= 1e-14 max(1, x_norm)` are skipped.
    pub fn mbfgs_update(&mut self, s: &[f64], y: &[f64], x_norm: f64) -> UpdateOutcome {
        let bs = self.b.apply_vec(s);
        self.mbfgs_update_with(s, &bs, y, x_norm)
    }

    /// [`Self::mbfgs_update`] with `Bs` supplied by the caller, saving one product.
    pub fn mbfgs_update_with(&mut self, s: &[f64], bs: &[f64], y: &[f64], x_norm: f64) -> UpdateOutcome {
        let n = self.n();
        assert_eq!(s.len(), n);
        assert_eq!(bs.len(), n);
        assert_eq!(y.len(), n);

        let ss = dot(s, s);
        if ss.sqrt() <= SKIP_FACTOR * x_norm.max(1.0) {
            self.updates_skipped += 1;
            return UpdateOutcome::SkippedShortStep;
        }

        let r = (-dot(y, s) / ss).max(0.0) + CURVATURE_SHIFT;
        let ybar: Vec<f64> = y.iter().zip(s).map(|(yi, si)| yi + r * si).collect();
        let ys = dot(&ybar, s);
        let sbs = dot(s, bs);
        if !(ys > 0.0 && sbs > 0.0 && ys.is_finite() && sbs.is_finite()) {
            self.reset();
            return UpdateOutcome::Reset;
        }

        // u u' - v v' with pre-scaled factors is exactly symmetric entrywise;
        // the Frobenius norm is accumulated in the same pass over B
        let (ry, rb) = (ys.sqrt(), sbs.sqrt());
        let u: Vec<f64> = ybar.iter().map(|v| v / ry).collect();
        let v: Vec<f64> = bs.iter().map(|x| x / rb).collect();
        let mut fro2 = 0.0;
        for (j, col) in self.b.as_mut_slice().chunks_exact_mut(n).enumerate() {
            let (uj, vj) = (u[j], v[j]);
            for ((bij, ui), vi) in col.iter_mut().zip(&u).zip(&v) {
                *bij += ui * uj - vi * vj;
                fro2 += *bij * *bij;
            }
        }
        let fro = fro2.sqrt();
        if !(fro <= self.norm_cap) {
            self.reset();
            return UpdateOutcome::Reset;
        }
        self.updates_applied += 1;
        UpdateOutcome::Applied { ybar, shift: r }
    }

    fn reset(&mut self) {
        let n = self.n();
        self.b = DMatrix::identity(n, n);
        self.updates_skipped += 1;
    }

    /// Whether a Cholesky factorization of `B` succeeds.
    pub fn is_positive_definite(&self) -> bool {
        self.b.clone().cholesky().is_some()
    }

    /// Secant residual `||Bs - ybar|| / max(1, ||ybar||)`.
    pub fn secant_residual(&self, s: &[f64], ybar: &[f64]) -> f64 {
        let bs = self.b.apply_vec(s);
        let diff: Vec<f64> = bs.iter().zip(ybar).map(|(a, b)| a - b).collect();
        norm(&diff) / norm(ybar).max(1.0)
    }
}

impl SymOperator for HessianApprox {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.b.apply(v, out)
    }
}
