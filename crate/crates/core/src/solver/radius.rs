//! Adaptive initial radius, shrink factor and ratio.

use thiserror::Error;

use super::config::TrustRegionConfig;
use crate::linalg::{dot, norm, SymOperator};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("ratio undefined: predicted reduction {0} is not positive")]
pub struct RatioError(pub f64);

/// Curvature below this is treated as degenerate when sizing the radius.
const MIN_CURVATURE: f64 = 1e-300;

/// Direction used to size the initial radius: the previous step when it is
/// still a sufficiently good descent direction, otherwise `-g`.
pub fn compute_qk(g: &[f64], d_prev: Option<&[f64]>, tau: f64) -> Vec<f64> {
    if let Some(d) = d_prev {
        let dn = norm(d);
        if dn > 0.0 {
            let cosine = -dot(g, d) / (norm(g) * dn);
            if cosine > tau {
                return d.to_vec();
            }
        }
    }
    g.iter().map(|v| -v).collect()
}

/// Model-minimizer length along `q`, enlarged to `gamma * delta_prev` after
/// the first iteration.
pub fn compute_sk<B: SymOperator + ?Sized>(
    q: &[f64],
    g: &[f64],
    b: &B,
    delta_prev: Option<f64>,
    gamma: f64,
) -> f64 {
    let curv = dot(q, &b.apply_vec(q));
    let base = if curv > MIN_CURVATURE {
        -dot(g, q) / curv * norm(q)
    } else {
        log::warn!("degenerate curvature {curv:e} along q; sizing radius by ||g||");
        norm(g)
    };
    match delta_prev {
        Some(dp) => base.max(gamma * dp),
        None => base,
    }
}

/// `c(delta) = (alpha0 - alpha1) delta / delta_bar + alpha1`, with `delta`
/// clamped into `(0, delta_bar]`.
pub fn shrink_factor(delta: f64, cfg: &TrustRegionConfig) -> f64 {
    let d = delta.clamp(0.0, cfg.delta_bar);
    (cfg.alpha0 - cfg.alpha1) * d / cfg.delta_bar + cfg.alpha1
}

/// `(C - f_trial) / pred`.
pub fn acceptance_ratio(reference: f64, f_trial: f64, pred: f64) -> Result<f64, RatioError> {
    if !(pred > MIN_CURVATURE) {
        return Err(RatioError(pred));
    }
    Ok((reference - f_trial) / pred)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Diagonal;

    #[test]
    fn qk_branches() {
        assert_eq!(compute_qk(&[3.0, 4.0], None, 0.1), vec![-3.0, -4.0]);
        assert_eq!(compute_qk(&[1.0, 0.0], Some(&[-1.0, 0.0]), 0.5), vec![-1.0, 0.0]);
        assert_eq!(compute_qk(&[1.0, 0.0], Some(&[0.0, 1.0]), 0.5), vec![-1.0, 0.0]);
        // degenerate previous step falls back to -g
        assert_eq!(compute_qk(&[1.0, 0.0], Some(&[0.0, 0.0]), 0.5), vec![-1.0, 0.0]);
    }

    #[test]
    fn qk_tie_uses_gradient() {
        // cosine exactly tau selects -g
        assert_eq!(compute_qk(&[1.0, 0.0], Some(&[-3.0, 4.0]), 0.6), vec![-1.0, 0.0]);
        assert_eq!(compute_qk(&[1.0, 0.0], Some(&[-3.0, 4.0]), 0.59), vec![-3.0, 4.0]);
    }

    #[test]
    fn sk_examples() {
        let id = Diagonal(vec![1.0, 1.0]);
        assert_eq!(compute_sk(&[-1.0, 0.0], &[1.0, 0.0], &id, None, 1.7), 1.0);
        let b = Diagonal(vec![4.0, 1.0]);
        let q = [-2.0, 0.0];
        assert_eq!(compute_sk(&q, &[2.0, 0.0], &b, Some(10.0), 1.7), 17.0);
        assert_eq!(compute_sk(&q, &[2.0, 0.0], &b, Some(0.1), 1.7), 0.5);
    }

    #[test]
    fn sk_degenerate_curvature() {
        let b = Diagonal(vec![0.0, 0.0]);
        assert_eq!(compute_sk(&[-3.0, -4.0], &[3.0, 4.0], &b, None, 1.7), 5.0);
    }

    #[test]
    fn shrink_factor_endpoints() {
        let c = TrustRegionConfig::default();
        assert!((shrink_factor(100.0, &c) - 0.15).abs() < 1e-15);
        assert!((shrink_factor(50.0, &c) - 0.25).abs() < 1e-15);
        assert!((shrink_factor(1e-300, &c) - 0.35).abs() < 1e-15);
        assert!((shrink_factor(1e6, &c) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(acceptance_ratio(10.0, 9.0, 2.0), Ok(0.5));
        assert_eq!(acceptance_ratio(10.0, 10.5, 2.0), Ok(-0.25));
        assert!(acceptance_ratio(10.0, 9.0, 0.0).is_err());
        assert!(acceptance_ratio(10.0, 9.0, -1.0).is_err());
    }
}
