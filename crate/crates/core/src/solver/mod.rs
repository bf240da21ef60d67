//! The trust-region driver.
//!
//! Each outer iteration sizes an initial radius from the current gradient and
//! curvature, fixes a reference value `C_k` according to the policy, then
//! solves the subproblem and shrinks the radius until the ratio
//! `(C_k - f(x + d)) / pred` reaches `mu`. Accepted steps feed the MBFGS update
//! with `s = d` and `y = g_{k+1} - g_k`.

mod config;
mod nonmonotone;
mod radius;
mod trace;

use thiserror::Error;

pub use config::{ConfigError, Policy, TrustRegionConfig};
pub use nonmonotone::NonmonotoneState;
pub use radius::{acceptance_ratio, compute_qk, compute_sk, shrink_factor, RatioError};
pub use trace::{read_trace, write_trace, IterationRecord, TraceParseError, TRACE_HEADER};

use crate::clock::Stopwatch;
use crate::linalg::{all_finite, norm};
use crate::problems::Problem;
use crate::quasinewton::{HessianApprox, UpdateOutcome};
use crate::subproblem::{solve_subproblem, CgOptions, SubproblemResult};

/// Radii below this end the inner loop with a numerical failure.
pub const MIN_RADIUS: f64 = 1e-16;
/// Extra inner iterations allowed beyond the geometric bound.
const INNER_SAFETY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    MaxIters,
    MaxFevals,
    NumericalFailure,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIters => "max-iters",
            Status::MaxFevals => "max-fevals",
            Status::NumericalFailure => "numerical-failure",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        [Status::Converged, Status::MaxIters, Status::MaxFevals, Status::NumericalFailure]
            .into_iter()
            .find(|st| st.as_str() == s)
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("Hessian approximation has dimension {hessian} but the problem has {problem}")]
    DimensionMismatch { problem: usize, hessian: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub status: Status,
    pub iters: usize,
    pub fevals: usize,
    pub gevals: usize,
    pub wall_time: f64,
    /// Returned point: the final iterate on convergence, otherwise the best
    /// accepted iterate.
    pub x: Vec<f64>,
    pub final_f: f64,
    pub final_gnorm: f64,
    pub trace: Option<Vec<IterationRecord>>,
    /// Human-readable cause when `status` is a numerical failure.
    pub failure: Option<String>,
}

impl RunResult {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// Start of an outer iteration, after the radius and reference are fixed.
#[derive(Debug)]
pub struct OuterEvent<'a> {
    pub k: usize,
    pub x: &'a [f64],
    pub f: f64,
    pub g: &'a [f64],
    pub hessian: &'a HessianApprox,
    pub q: &'a [f64],
    pub s_k: f64,
    pub delta0: f64,
    pub reference: f64,
    pub state: &'a NonmonotoneState,
}

/// One subproblem solve and ratio test inside the inner loop.
#[derive(Debug)]
pub struct TrialEvent<'a> {
    pub k: usize,
    pub p: usize,
    pub delta: f64,
    pub step: &'a SubproblemResult,
    pub f_trial: f64,
    pub ratio: f64,
    pub accepted: bool,
}

/// Hooks for inspecting a run as it happens. All methods default to no-ops.
pub trait Observer {
    fn outer(&mut self, _ev: &OuterEvent<'_>) {}
    fn trial(&mut self, _ev: &TrialEvent<'_>) {}
    fn hessian_update(&mut self, _k: usize, _h: &HessianApprox, _s: &[f64], _outcome: &UpdateOutcome) {}
    /// After an accepted step has been folded into the nonmonotone state.
    fn accepted(&mut self, _k: usize, _f_new: f64, _state: &NonmonotoneState) {}
}

pub struct NoObserver;

impl Observer for NoObserver {}

/// Inner-loop cap derived from the slowest possible radius decay.
pub fn max_inner_iterations(cfg: &TrustRegionConfig) -> usize {
    let factor = if cfg.policy.adaptive_shrink() { cfg.alpha1 } else { cfg.c_fixed };
    let bound = ((MIN_RADIUS / cfg.delta_bar).ln() / factor.ln()).ceil();
    bound.max(0.0) as usize + INNER_SAFETY
}

pub fn solve(p: &Problem, cfg: &TrustRegionConfig, hessian: HessianApprox) -> Result<RunResult, SolveError> {
    solve_observed(p, cfg, hessian, &mut NoObserver)
}

pub fn solve_observed<O: Observer + ?Sized>(
    p: &Problem,
    cfg: &TrustRegionConfig,
    mut hess: HessianApprox,
    obs: &mut O,
) -> Result<RunResult, SolveError> {
    cfg.validate()?;
    let n = p.dim();
    if hess.n() != n {
        return Err(SolveError::DimensionMismatch { problem: n, hessian: hess.n() });
    }

    let clock = Stopwatch::start();
    let cg = CgOptions {
        rel_tol: cfg.cg_rel_tol,
        max_iters: cfg.max_cg,
        record_history: false,
    };
    let inner_cap = max_inner_iterations(cfg);

    let mut run = Run {
        x: p.x0().to_vec(),
        f: 0.0,
        g: vec![0.0; n],
        fevals: 0,
        gevals: 0,
        iters: 0,
        best: None,
        trace: cfg.record_trace.then(Vec::new),
    };
    run.f = p.eval_f(&run.x);
    run.fevals += 1;
    p.eval_g_into(&run.x, &mut run.g);
    run.gevals += 1;
    if !run.f.is_finite() || !all_finite(&run.g) {
        return Ok(run.finish(Status::NumericalFailure, &clock, Some("non-finite value at the start point")));
    }

    let tol = cfg.eps_rel * norm(&run.g);
    let mut state = NonmonotoneState::new(run.f, cfg);
    let mut d_prev: Option<Vec<f64>> = None;
    let mut delta_prev: Option<f64> = None;
    let mut x_trial = vec![0.0; n];
    let mut g_new = vec![0.0; n];

    loop {
        let k = run.iters;
        let gnorm = norm(&run.g);
        if gnorm <= tol {
            return Ok(run.finish(Status::Converged, &clock, None));
        }
        if k >= cfg.max_iters {
            return Ok(run.finish(Status::MaxIters, &clock, None));
        }

        let q = compute_qk(&run.g, d_prev.as_deref(), cfg.tau);
        let s_k = compute_sk(&q, &run.g, &hess, delta_prev, cfg.gamma);
        let delta0 = s_k.min(cfg.delta_bar);
        let reference = state.reference_value(cfg);
        obs.outer(&OuterEvent {
            k,
            x: &run.x,
            f: run.f,
            g: &run.g,
            hessian: &hess,
            q: &q,
            s_k,
            delta0,
            reference,
            state: &state,
        });
        if !(delta0 > 0.0 && delta0.is_finite()) {
            return Ok(run.finish(Status::NumericalFailure, &clock, Some("initial radius is not positive")));
        }

        let mut delta = delta0;
        let mut rejections = 0;
        let (step, f_trial) = loop {
            let step = match solve_subproblem(&run.g, &hess, delta, &cg) {
                Ok(s) => s,
                Err(e) => return Ok(run.finish(Status::NumericalFailure, &clock, Some(&e.to_string()))),
            };
            if run.fevals >= cfg.max_fevals {
                return Ok(run.finish(Status::MaxFevals, &clock, None));
            }
            for ((xt, xi), di) in x_trial.iter_mut().zip(&run.x).zip(&step.d) {
                *xt = xi + di;
            }
            let f_trial = p.eval_f(&x_trial);
            run.fevals += 1;

            // a non-finite trial value is a rejected step, not a failure
            let ratio = if f_trial.is_finite() {
                match acceptance_ratio(reference, f_trial, step.pred) {
                    Ok(r) => r,
                    Err(e) => return Ok(run.finish(Status::NumericalFailure, &clock, Some(&e.to_string()))),
                }
            } else {
                f64::NEG_INFINITY
            };
            let accepted = ratio >= cfg.mu;
            obs.trial(&TrialEvent {
                k,
                p: rejections,
                delta,
                step: &step,
                f_trial,
                ratio,
                accepted,
            });
            if accepted {
                break (step, f_trial);
            }

            delta = if cfg.policy.adaptive_shrink() {
                shrink_factor(delta, cfg) * step.step_norm()
            } else {
                cfg.c_fixed * delta
            };
            rejections += 1;
            if delta < MIN_RADIUS || rejections > inner_cap {
                return Ok(run.finish(
                    Status::NumericalFailure,
                    &clock,
                    Some("trust region collapsed without an acceptable step"),
                ));
            }
        };

        p.eval_g_into(&x_trial, &mut g_new);
        run.gevals += 1;
        if !all_finite(&g_new) {
            return Ok(run.finish(Status::NumericalFailure, &clock, Some("non-finite gradient")));
        }

        let y: Vec<f64> = g_new.iter().zip(&run.g).map(|(a, b)| a - b).collect();
        let outcome = hess.mbfgs_update_with(&step.d, &step.bd, &y, norm(&x_trial));
        obs.hessian_update(k, &hess, &step.d, &outcome);

        state.update_counters(f_trial, cfg);
        obs.accepted(k, f_trial, &state);

        if let Some(t) = run.trace.as_mut() {
            t.push(IterationRecord {
                k,
                f: run.f,
                gnorm,
                delta0,
                inner_rejections: rejections,
                reference,
                accepted_step_norm: step.step_norm(),
                fevals_so_far: run.fevals,
                gevals_so_far: run.gevals,
            });
        }

        run.remember_best();
        std::mem::swap(&mut run.x, &mut x_trial);
        std::mem::swap(&mut run.g, &mut g_new);
        run.f = f_trial;
        run.iters += 1;
        delta_prev = Some(delta);
        d_prev = Some(step.d);
    }
}

/// Mutable bookkeeping of one solve.
struct Run {
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
    fevals: usize,
    gevals: usize,
    iters: usize,
    /// Lowest accepted iterate seen before the current one: (f, gnorm, x).
    best: Option<(f64, f64, Vec<f64>)>,
    trace: Option<Vec<IterationRecord>>,
}

impl Run {
    fn remember_best(&mut self) {
        if self.best.as_ref().is_none_or(|(bf, _, _)| self.f < *bf) {
            self.best = Some((self.f, norm(&self.g), self.x.clone()));
        }
    }

    fn finish(self, status: Status, clock: &Stopwatch, failure: Option<&str>) -> RunResult {
        let current_gnorm = norm(&self.g);
        let (x, final_f, final_gnorm) = match self.best {
            Some((bf, bg, bx)) if status != Status::Converged && bf < self.f => (bx, bf, bg),
            _ => (self.x, self.f, current_gnorm),
        };
        RunResult {
            status,
            iters: self.iters,
            fevals: self.fevals,
            gevals: self.gevals,
            wall_time: clock.seconds(),
            x,
            final_f,
            final_gnorm,
            trace: self.trace,
            failure: failure.map(str::to_string),
        }
    }
}
