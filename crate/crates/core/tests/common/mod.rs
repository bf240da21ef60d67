//! Helpers shared by the integration tests: an exact trust-region oracle,
//! random model instances, and a recording observer for traced runs.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use natr::linalg::{dot, norm, sym_spectral_norm};
use natr::problems::{self, Problem};
use natr::quasinewton::UpdateOutcome;
use natr::solver::{self, Observer, OuterEvent, Policy, RunResult, TrialEvent, TrustRegionConfig};
use natr::subproblem::Termination;
use natr::HessianApprox;
use rand::Rng;

/// Exact minimizer of `g'd + 1/2 d'Bd` over `||d|| <= delta`, from the
/// eigendecomposition of `B` and a bisection on the secular equation.
/// Returns `(d, pred)`.
pub fn exact_subproblem(b: &DMatrix<f64>, g: &[f64], delta: f64) -> (Vec<f64>, f64) {
    let n = g.len();
    let eig = SymmetricEigen::new(b.clone());
    let q = &eig.eigenvectors;
    let lam = &eig.eigenvalues;
    let gh = q.transpose() * DVector::from_column_slice(g);
    let (imin, lmin) = lam.iter().copied().enumerate().fold((0, f64::INFINITY), |a, (i, l)| {
        if l < a.1 { (i, l) } else { a }
    });
    let lmax = lam.iter().fold(0.0_f64, |a, &l| a.max(l.abs()));
    let coords = |shift: f64| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let den = lam[i] + shift;
                if den > 0.0 { -gh[i] / den } else { 0.0 }
            })
            .collect()
    };
    let to_d = |c: &[f64]| -> Vec<f64> { (q * DVector::from_column_slice(c)).iter().copied().collect() };

    let lo = (-lmin).max(0.0);
    let gnorm = norm(g);
    let scale = lmax.max(1.0);
    // interior Newton step
    if lmin > 0.0 {
        let c = coords(0.0);
        if norm(&c) <= delta {
            let d = to_d(&c);
            return (d.clone(), pred_of(b, g, &d));
        }
    }
    // hard case: the step at the smallest admissible shift stays inside the ball
    let tiny = 1e-12 * scale;
    let hard = gh[imin].abs() <= 1e-10 * gnorm.max(1e-300);
    if hard {
        let mut c: Vec<f64> = (0..n)
            .map(|i| if lam[i] - lmin > tiny { -gh[i] / (lam[i] + lo) } else { 0.0 })
            .collect();
        let cn = norm(&c);
        if cn <= delta {
            c[imin] = (delta * delta - cn * cn).max(0.0).sqrt();
            let d = to_d(&c);
            return (d.clone(), pred_of(b, g, &d));
        }
    }
    let mut a = lo;
    let mut z = lo + gnorm / delta + lmax + 1.0;
    for _ in 0..400 {
        let mid = 0.5 * (a + z);
        if mid <= a || mid >= z {
            break;
        }
        if norm(&coords(mid)) > delta { a = mid } else { z = mid }
    }
    let d = to_d(&coords(z));
    (d.clone(), pred_of(b, g, &d))
}

pub fn pred_of(b: &DMatrix<f64>, g: &[f64], d: &[f64]) -> f64 {
    let bd = b * DVector::from_column_slice(d);
    -(dot(g, d) + 0.5 * dot(d, bd.as_slice()))
}

/// Random symmetric matrix with prescribed eigenvalues and a random basis.
pub fn random_symmetric<R: Rng>(rng: &mut R, eigenvalues: &[f64]) -> DMatrix<f64> {
    let n = eigenvalues.len();
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let q = m.qr().q();
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(eigenvalues));
    let b = &q * d * q.transpose();
    // exact symmetry
    (&b + b.transpose()) * 0.5
}

/// A random model instance: SPD when `spd`, otherwise with eigenvalues of
/// both signs. Magnitudes are log-uniform in `[1e-2, 1e2]`.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, spd: bool) -> (DMatrix<f64>, Vec<f64>, f64) {
    let mut eig: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-2.0..2.0))).collect();
    if !spd {
        let flip = rng.random_range(0..n);
        eig[flip] = -eig[flip];
        for e in eig.iter_mut() {
            if rng.random_bool(0.3) {
                *e = -*e;
            }
        }
    }
    let b = random_symmetric(rng, &eig);
    let g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let delta = 10f64.powf(rng.random_range(-2.0..2.0));
    (b, g, delta)
}

/// Every registered family at the smallest admissible dimension `>= min_dim`.
pub fn small_problems(min_dim: usize) -> Vec<Problem> {
    problems::registry()
        .into_iter()
        .map(|f| {
            let n = (min_dim..).find(|&n| f.rule.admits(n)).unwrap();
            problems::make_problem(f.name, n).unwrap()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TrialRec {
    pub p: usize,
    pub delta: f64,
    pub step_norm: f64,
    pub termination: Termination,
    pub accepted: bool,
    pub f_trial: f64,
}

#[derive(Debug, Clone)]
pub struct OuterRec {
    pub k: usize,
    pub f: f64,
    pub gnorm: f64,
    /// `||B_k||_2` from the eigendecomposition; `NaN` when not requested.
    pub b_norm: f64,
    pub delta0: f64,
    pub reference: f64,
    pub increase_counter: usize,
    pub trials: Vec<TrialRec>,
}

#[derive(Debug, Clone)]
pub struct UpdateRec {
    pub k: usize,
    pub applied: bool,
    pub secant_rel: f64,
    pub cholesky_ok: bool,
    pub ybar_s: f64,
    pub s_sq: f64,
    /// Roundoff allowance for `ybar's`.
    pub ybar_s_slack: f64,
    pub frobenius: f64,
}

/// Records outer iterations, trials and Hessian updates.
pub struct Recorder {
    pub spectral: bool,
    pub check_updates: bool,
    pub outers: Vec<OuterRec>,
    pub updates: Vec<UpdateRec>,
}

impl Recorder {
    pub fn new(spectral: bool, check_updates: bool) -> Self {
        Recorder { spectral, check_updates, outers: Vec::new(), updates: Vec::new() }
    }

    /// Accepted objective values `f_1, f_2, ...` in order.
    pub fn accepted_values(&self) -> Vec<f64> {
        self.outers
            .iter()
            .filter_map(|o| o.trials.iter().find(|t| t.accepted).map(|t| t.f_trial))
            .collect()
    }
}

impl Observer for Recorder {
    fn outer(&mut self, ev: &OuterEvent<'_>) {
        let b_norm = if self.spectral { sym_spectral_norm(ev.hessian.matrix()) } else { f64::NAN };
        self.outers.push(OuterRec {
            k: ev.k,
            f: ev.f,
            gnorm: norm(ev.g),
            b_norm,
            delta0: ev.delta0,
            reference: ev.reference,
            increase_counter: ev.state.increase_counter(),
            trials: Vec::new(),
        });
    }

    fn trial(&mut self, ev: &TrialEvent<'_>) {
        let rec = TrialRec {
            p: ev.p,
            delta: ev.delta,
            step_norm: ev.step.step_norm(),
            termination: ev.step.termination,
            accepted: ev.accepted,
            f_trial: ev.f_trial,
        };
        self.outers.last_mut().expect("trial follows an outer event").trials.push(rec);
    }

    fn hessian_update(&mut self, k: usize, h: &HessianApprox, s: &[f64], outcome: &UpdateOutcome) {
        if !self.check_updates {
            return;
        }
        let s_sq = dot(s, s);
        let rec = match outcome {
            UpdateOutcome::Applied { ybar, shift } => {
                let bs = h.matrix() * DVector::from_column_slice(s);
                let diff: Vec<f64> = bs.iter().zip(ybar).map(|(a, b)| a - b).collect();
                let ybar_s = dot(ybar, s);
                // bounds sum |y_i s_i| + |ybar_i s_i| without seeing y itself
                let abs_terms: f64 =
                    2.0 * ybar.iter().zip(s).map(|(a, b)| (a * b).abs()).sum::<f64>() + shift * s_sq;
                UpdateRec {
                    k,
                    applied: true,
                    secant_rel: norm(&diff) / norm(ybar).max(1.0),
                    cholesky_ok: h.is_positive_definite(),
                    ybar_s,
                    s_sq,
                    ybar_s_slack: 4.0 * f64::EPSILON * (abs_terms + s_sq) * s.len() as f64,
                    frobenius: h.frobenius_norm(),
                }
            }
            _ => UpdateRec {
                k,
                applied: false,
                secant_rel: 0.0,
                cholesky_ok: h.is_positive_definite(),
                ybar_s: 0.0,
                s_sq,
                ybar_s_slack: 0.0,
                frobenius: h.frobenius_norm(),
            },
        };
        self.updates.push(rec);
    }
}

/// Solves `p` under `policy` with a [`Recorder`] attached.
pub fn traced_run(p: &Problem, policy: Policy, spectral: bool, check_updates: bool) -> (RunResult, Recorder) {
    let cfg = TrustRegionConfig::with_policy(policy);
    let mut rec = Recorder::new(spectral, check_updates);
    let h = HessianApprox::with_norm_cap(p.dim(), cfg.norm_cap).unwrap();
    let res = solver::solve_observed(p, &cfg, h, &mut rec).unwrap();
    (res, rec)
}
