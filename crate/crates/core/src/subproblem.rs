//! Steihaug-Toint truncated conjugate gradient for
//!
//! ```text
//! min  g'd + 1/2 d'Bd   subject to  ||d|| <= delta
//! ```
//!
//! CG starts from `d = 0`. It stops on the boundary when it meets negative
//! curvature or when the next iterate would leave the ball. Otherwise it stops
//! once the model residual `||Bd + g||` drops below `cg_rel_tol * ||g||`.
//! Iterate norms grow monotonically and so does the model decrease, so the
//! first iterate already satisfies the Cauchy decrease condition.

use thiserror::Error;

use crate::linalg::{axpy, dot, norm, SymOperator};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubproblemError {
    #[error("gradient must be nonzero")]
    ZeroGradient,
    #[error("trust-region radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("gradient has {got} entries but the operator has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value encountered in CG iteration {0}")]
    NonFinite(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ResidualConverged,
    Boundary,
    NegativeCurvature,
    MaxIters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemResult {
    pub d: Vec<f64>,
    /// `Bd`, recovered from the CG residual without another product.
    pub bd: Vec<f64>,
    /// `m(0) - m(d) = -(g'd + 1/2 d'Bd)`.
    pub pred: f64,
    pub boundary_hit: bool,
    pub cg_iters: usize,
    pub termination: Termination,
    /// Model decrease after each CG iterate, when requested.
    pub pred_history: Vec<f64>,
}

impl SubproblemResult {
    pub fn step_norm(&self) -> f64 {
        norm(&self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CgOptions {
    /// Relative residual tolerance; `None` selects `min(0.1, sqrt(||g||))`.
    pub rel_tol: Option<f64>,
    /// Iteration cap; `None` selects `2n`.
    pub max_iters: Option<usize>,
    pub record_history: bool,
}

impl CgOptions {
    pub fn tolerance_for(&self, gnorm: f64) -> f64 {
        self.rel_tol.unwrap_or_else(|| gnorm.sqrt().min(0.1))
    }
}

/// `m(0) - m(d) = -(g'd + 1/2 d'Bd)`.
pub fn predicted_reduction<B: SymOperator + ?Sized>(g: &[f64], b: &B, d: &[f64]) -> f64 {
    assert_eq!(g.len(), d.len(), "g and d must have the same length");
    let bd = b.apply_vec(d);
    -(dot(g, d) + 0.5 * dot(d, &bd))
}

/// Positive root `t` of `||d + t p|| = delta`, assuming `||d|| <= delta`.
///
/// Written to avoid cancellation between `-b` and the square root.
pub(crate) fn boundary_step(d: &[f64], p: &[f64], delta: f64) -> f64 {
    let a = dot(p, p);
    let b = 2.0 * dot(d, p);
    let c = (dot(d, d) - delta * delta).min(0.0);
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    if b >= 0.0 {
        if disc + b == 0.0 {
            0.0
        } else {
            -2.0 * c / (b + disc)
        }
    } else {
        (disc - b) / (2.0 * a)
    }
}

pub fn solve_subproblem<B: SymOperator + ?Sized>(
    g: &[f64],
    b: &B,
    delta: f64,
    opts: &CgOptions,
) -> Result<SubproblemResult, SubproblemError> {
    let n = b.dim();
    if g.len() != n {
        return Err(SubproblemError::DimensionMismatch { expected: n, got: g.len() });
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(SubproblemError::InvalidRadius(delta));
    }
    let gnorm = norm(g);
    if gnorm == 0.0 {
        return Err(SubproblemError::ZeroGradient);
    }
    if !gnorm.is_finite() {
        return Err(SubproblemError::NonFinite(0));
    }

    #[cfg(debug_assertions)]
    debug_check_symmetry(b);

    let tol = opts.tolerance_for(gnorm) * gnorm;
    let max_iters = opts.max_iters.unwrap_or(2 * n).max(1);

    let mut d = vec![0.0; n];
    // r = Bd + g, the model gradient at d
    let mut r = g.to_vec();
    let mut p: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut bp = vec![0.0; n];
    let mut rr = gnorm * gnorm;
    // running m(0) - m(d)
    let mut decrease = 0.0;
    let mut history = Vec::new();

    let mut termination = Termination::MaxIters;
    let mut iters = 0;
    while iters < max_iters {
        iters += 1;
        b.apply(&p, &mut bp);
        let curv = dot(&p, &bp);
        if !curv.is_finite() {
            return Err(SubproblemError::NonFinite(iters));
        }

        let rp = dot(&r, &p);
        if curv <= 0.0 {
            let t = boundary_step(&d, &p, delta);
            axpy(t, &p, &mut d);
            axpy(t, &bp, &mut r);
            decrease -= t * rp + 0.5 * t * t * curv;
            termination = Termination::NegativeCurvature;
            if opts.record_history {
                history.push(decrease);
            }
            break;
        }

        let alpha = rr / curv;
        let mut trial = d.clone();
        axpy(alpha, &p, &mut trial);
        if norm(&trial) >= delta {
            let t = boundary_step(&d, &p, delta);
            axpy(t, &p, &mut d);
            axpy(t, &bp, &mut r);
            decrease -= t * rp + 0.5 * t * t * curv;
            termination = Termination::Boundary;
            if opts.record_history {
                history.push(decrease);
            }
            break;
        }

        d = trial;
        decrease -= alpha * rp + 0.5 * alpha * alpha * curv;
        if opts.record_history {
            history.push(decrease);
        }
        axpy(alpha, &bp, &mut r);
        let rr_new = dot(&r, &r);
        if !rr_new.is_finite() {
            return Err(SubproblemError::NonFinite(iters));
        }
        if rr_new.sqrt() <= tol {
            termination = Termination::ResidualConverged;
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = -ri + beta * *pi;
        }
    }

    let bd: Vec<f64> = r.iter().zip(g).map(|(ri, gi)| ri - gi).collect();
    let pred = -(dot(g, &d) + 0.5 * dot(&d, &bd));
    if !pred.is_finite() || !d.iter().all(|v| v.is_finite()) {
        return Err(SubproblemError::NonFinite(iters));
    }
    Ok(SubproblemResult {
        d,
        bd,
        pred,
        boundary_hit: matches!(termination, Termination::Boundary | Termination::NegativeCurvature),
        cg_iters: iters,
        termination,
        pred_history: history,
    })
}

#[cfg(debug_assertions)]
fn debug_check_symmetry<B: SymOperator + ?Sized>(b: &B) {
    let n = b.dim();
    if n > 200 {
        return;
    }
    let u: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) as f64).sin()).collect();
    let v: Vec<f64> = (0..n).map(|i| ((i * 5 + 1) as f64).cos()).collect();
    let lhs = dot(&u, &b.apply_vec(&v));
    let rhs = dot(&b.apply_vec(&u), &v);
    if !(lhs.is_finite() && rhs.is_finite()) {
        // reported as NonFinite by the iteration itself
        return;
    }
    debug_assert!(
        (lhs - rhs).abs() <= 1e-8 * lhs.abs().max(rhs.abs()).max(1.0),
        "operator is not symmetric: {lhs} vs {rhs}"
    );
}
