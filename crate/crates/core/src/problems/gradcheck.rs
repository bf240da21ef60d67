use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Problem, ProblemError};
use crate::linalg::all_finite;

/// Outcome of a central-difference gradient check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckReport {
    /// `max_i |g_i - fd_i| / max(1, |g_i|)` over all tested points.
    pub max_rel_err: f64,
    /// Coordinate where the maximum was attained.
    pub worst_index: usize,
    pub points_tested: usize,
}

impl GradCheckReport {
    fn merge(self, other: GradCheckReport) -> GradCheckReport {
        let (max_rel_err, worst_index) = if other.max_rel_err > self.max_rel_err {
            (other.max_rel_err, other.worst_index)
        } else {
            (self.max_rel_err, self.worst_index)
        };
        GradCheckReport {
            max_rel_err,
            worst_index,
            points_tested: self.points_tested + other.points_tested,
        }
    }
}

/// Compares the analytic gradient at `x` against central differences with step `h`.
pub fn check_gradient(p: &Problem, x: &[f64], h: f64) -> Result<GradCheckReport, ProblemError> {
    if x.len() != p.dim() {
        return Err(ProblemError::DimensionMismatch {
            expected: p.dim(),
            got: x.len(),
        });
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(ProblemError::InvalidStep(h));
    }
    let f = p.eval_f(x);
    let g = p.eval_g(x);
    if !f.is_finite() || !all_finite(&g) {
        return Err(ProblemError::EvaluationFailure);
    }

    let mut xp = x.to_vec();
    let mut max_rel_err = 0.0;
    let mut worst_index = 0;
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let fp = p.eval_f(&xp);
        xp[i] = x[i] - h;
        let fm = p.eval_f(&xp);
        xp[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(ProblemError::EvaluationFailure);
        }
        let fd = (fp - fm) / (2.0 * h);
        let err = (g[i] - fd).abs() / g[i].abs().max(1.0);
        if err > max_rel_err {
            max_rel_err = err;
            worst_index = i;
        }
    }
    Ok(GradCheckReport {
        max_rel_err,
        worst_index,
        points_tested: 1,
    })
}

/// Runs [`check_gradient`] at `points` uniform random points in `[-radius, radius]^n`.
pub fn check_gradient_random(
    p: &Problem,
    points: usize,
    radius: f64,
    seed: u64,
    h: f64,
) -> Result<GradCheckReport, ProblemError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = GradCheckReport {
        max_rel_err: 0.0,
        worst_index: 0,
        points_tested: 0,
    };
    for _ in 0..points {
        let x: Vec<f64> = (0..p.dim()).map(|_| rng.random_range(-radius..=radius)).collect();
        report = report.merge(check_gradient(p, &x, h)?);
    }
    Ok(report)
}
