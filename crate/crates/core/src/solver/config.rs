use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    Invalid {
        name: &'static str,
        value: String,
        reason: &'static str,
    },
    #[error("unknown parameter `{0}`")]
    UnknownKey(String),
    #[error("cannot parse value `{value}` for {key}")]
    BadValue { key: String, value: String },
    #[error("unknown policy `{0}` (expected natr, iatr, niatr1, niatr2 or monotone)")]
    UnknownPolicy(String),
}

/// Reference-value policy and shrink rule, one per compared algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Windowed-max reference governed by the `M`/`I` counters, radius-dependent shrink.
    Natr,
    /// Monotone ratio, fixed shrink factor `c_fixed`.
    IatrMonotone,
    /// `R_k = eta f_l + (1 - eta) f_k`, fixed shrink.
    MaxWindow,
    /// `(1 + phi_k) R_k` with a summable `mu_k`, fixed shrink.
    RelaxedMax,
    /// Monotone ratio with the radius-dependent shrink.
    Monotone,
}

impl Policy {
    pub const ALL: [Policy; 5] = [
        Policy::Natr,
        Policy::IatrMonotone,
        Policy::MaxWindow,
        Policy::RelaxedMax,
        Policy::Monotone,
    ];

    /// The four algorithms of the reference comparison.
    pub const COMPARED: [Policy; 4] = [
        Policy::IatrMonotone,
        Policy::MaxWindow,
        Policy::RelaxedMax,
        Policy::Natr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Natr => "natr",
            Policy::IatrMonotone => "iatr",
            Policy::MaxWindow => "niatr1",
            Policy::RelaxedMax => "niatr2",
            Policy::Monotone => "monotone",
        }
    }

    /// Whether a rejected step shrinks the radius to `c(delta) ||d||`
    /// rather than `c_fixed * delta`.
    pub fn adaptive_shrink(self) -> bool {
        matches!(self, Policy::Natr | Policy::Monotone)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConfigError::UnknownPolicy(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrustRegionConfig {
    /// Acceptance threshold on the ratio.
    pub mu: f64,
    /// Angle threshold for reusing the previous step as the radius direction.
    pub tau: f64,
    /// Growth factor on the previous accepted radius.
    pub gamma: f64,
    /// Maximum radius.
    pub delta_bar: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    /// Window for `f_l` (the classical nonmonotone max).
    pub window: usize,
    /// Cap on the NATR window length.
    pub window_cap: usize,
    /// Cap on consecutive non-decreasing steps before NATR turns monotone.
    pub increase_cap: usize,
    /// Relative gap that resets the window counter.
    pub nu: f64,
    /// Shrink factor of the fixed-c baselines.
    pub c_fixed: f64,
    /// Convex weight for `R_k`.
    pub eta: f64,
    /// `mu_k = relax_scale / (k + 1)^relax_power`.
    pub relax_scale: f64,
    pub relax_power: f64,
    /// Stop once `||g_k|| <= eps_rel ||g_0||`.
    pub eps_rel: f64,
    pub max_iters: usize,
    pub max_fevals: usize,
    /// CG residual tolerance; `None` uses `min(0.1, sqrt(||g||))`.
    pub cg_rel_tol: Option<f64>,
    /// CG iteration cap; `None` uses `2n`.
    pub max_cg: Option<usize>,
    pub norm_cap: f64,
    pub policy: Policy,
    pub record_trace: bool,
}

impl Default for TrustRegionConfig {
    fn default() -> Self {
        TrustRegionConfig {
            mu: 0.01,
            tau: 0.1,
            gamma: 1.7,
            delta_bar: 100.0,
            alpha0: 0.15,
            alpha1: 0.35,
            window: 10,
            window_cap: 10,
            increase_cap: 3,
            nu: 0.25,
            c_fixed: 0.35,
            eta: 0.85,
            relax_scale: 0.5,
            relax_power: 1.1,
            eps_rel: 1e-6,
            max_iters: 10_000,
            max_fevals: 100_000,
            cg_rel_tol: None,
            max_cg: None,
            norm_cap: crate::quasinewton::DEFAULT_NORM_CAP,
            policy: Policy::Natr,
            record_trace: false,
        }
    }
}

fn invalid(name: &'static str, value: impl fmt::Display, reason: &'static str) -> ConfigError {
    ConfigError::Invalid {
        name,
        value: value.to_string(),
        reason,
    }
}

fn open_unit(name: &'static str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, v, "must lie in (0, 1)"))
    }
}

impl TrustRegionConfig {
    pub fn with_policy(policy: Policy) -> Self {
        TrustRegionConfig {
            policy,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        open_unit("mu", self.mu)?;
        open_unit("tau", self.tau)?;
        open_unit("c_fixed", self.c_fixed)?;
        open_unit("alpha0", self.alpha0)?;
        open_unit("alpha1", self.alpha1)?;
        if self.alpha0 >= self.alpha1 {
            return Err(invalid("alpha0", self.alpha0, "must be smaller than alpha1"));
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", self.gamma, "must be >= 1"));
        }
        if !(self.delta_bar > 0.0 && self.delta_bar.is_finite()) {
            return Err(invalid("delta_bar", self.delta_bar, "must be positive"));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(invalid("nu", self.nu, "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(invalid("eta", self.eta, "must lie in [0, 1]"));
        }
        if !(self.relax_scale > 0.0 && self.relax_power > 1.0) {
            return Err(invalid("relax_power", self.relax_power, "mu_k must be positive and summable"));
        }
        if !(self.eps_rel >= 0.0 && self.eps_rel.is_finite()) {
            return Err(invalid("eps_rel", self.eps_rel, "must be nonnegative"));
        }
        if self.max_fevals == 0 {
            return Err(invalid("max_fevals", self.max_fevals, "must be positive"));
        }
        if let Some(t) = self.cg_rel_tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(invalid("cg_rel_tol", t, "must lie in (0, 1)"));
            }
        }
        if self.max_cg == Some(0) {
            return Err(invalid("max_cg", 0, "must be positive"));
        }
        if !(self.norm_cap > 1.0) {
            return Err(invalid("norm_cap", self.norm_cap, "must exceed 1"));
        }
        Ok(())
    }

    /// Names accepted by [`TrustRegionConfig::set_param`].
    pub const PARAM_KEYS: [&'static str; 20] = [
        "mu", "tau", "gamma", "delta_bar", "alpha0", "alpha1", "N", "N_bar", "I_bar", "nu",
        "c_fixed", "eta", "relax_scale", "relax_power", "eps_rel", "max_iters", "max_fevals",
        "cg_rel_tol", "max_cg", "norm_cap",
    ];

    /// Sets one parameter from its textual `key=value` form.
    pub fn set_param(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
            value.trim().parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: value.to_string(),
            })
        }
        match key {
            "mu" => self.mu = num(key, value)?,
            "tau" => self.tau = num(key, value)?,
            "gamma" => self.gamma = num(key, value)?,
            "delta_bar" => self.delta_bar = num(key, value)?,
            "alpha0" => self.alpha0 = num(key, value)?,
            "alpha1" => self.alpha1 = num(key, value)?,
            "N" => self.window = num(key, value)?,
            "N_bar" => self.window_cap = num(key, value)?,
            "I_bar" => self.increase_cap = num(key, value)?,
            "nu" => self.nu = num(key, value)?,
            "c_fixed" => self.c_fixed = num(key, value)?,
            "eta" => self.eta = num(key, value)?,
            "relax_scale" => self.relax_scale = num(key, value)?,
            "relax_power" => self.relax_power = num(key, value)?,
            "eps_rel" => self.eps_rel = num(key, value)?,
            "max_iters" => self.max_iters = num(key, value)?,
            "max_fevals" => self.max_fevals = num(key, value)?,
            "cg_rel_tol" => self.cg_rel_tol = Some(num(key, value)?),
            "max_cg" => self.max_cg = Some(num(key, value)?),
            "norm_cap" => self.norm_cap = num(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// `(key, value)` pairs in [`TrustRegionConfig::PARAM_KEYS`] order.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "auto".to_string());
        vec![
            ("mu", self.mu.to_string()),
            ("tau", self.tau.to_string()),
            ("gamma", self.gamma.to_string()),
            ("delta_bar", self.delta_bar.to_string()),
            ("alpha0", self.alpha0.to_string()),
            ("alpha1", self.alpha1.to_string()),
            ("N", self.window.to_string()),
            ("N_bar", self.window_cap.to_string()),
            ("I_bar", self.increase_cap.to_string()),
            ("nu", self.nu.to_string()),
            ("c_fixed", self.c_fixed.to_string()),
            ("eta", self.eta.to_string()),
            ("relax_scale", self.relax_scale.to_string()),
            ("relax_power", self.relax_power.to_string()),
            ("eps_rel", self.eps_rel.to_string()),
            ("max_iters", self.max_iters.to_string()),
            ("max_fevals", self.max_fevals.to_string()),
            ("cg_rel_tol", opt(self.cg_rel_tol.map(|v| v.to_string()))),
            ("max_cg", opt(self.max_cg.map(|v| v.to_string()))),
            ("norm_cap", self.norm_cap.to_string()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_published_values() {
        let c = TrustRegionConfig::default();
        assert_eq!((c.window, c.mu, c.delta_bar, c.gamma), (10, 0.01, 100.0, 1.7));
        assert_eq!((c.alpha0, c.alpha1, c.window_cap, c.increase_cap, c.nu), (0.15, 0.35, 10, 3, 0.25));
        assert_eq!(c.c_fixed, 0.35);
        assert_eq!(c.eps_rel, 1e-6);
        c.validate().unwrap();
    }

    #[test]
    fn validation_catches_ordering() {
        let mut c = TrustRegionConfig::default();
        c.alpha0 = 0.5;
        assert!(c.validate().is_err());
        let mut c = TrustRegionConfig::default();
        c.gamma = 0.9;
        assert!(c.validate().is_err());
        let mut c = TrustRegionConfig::default();
        c.mu = 1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn params_round_trip_through_set_param() {
        let mut c = TrustRegionConfig::default();
        c.set_param("N_bar", "7").unwrap();
        c.set_param("tau", "0.2").unwrap();
        c.set_param("cg_rel_tol", "0.05").unwrap();
        let mut d = TrustRegionConfig::default();
        for (k, v) in c.params() {
            if v != "auto" {
                d.set_param(k, &v).unwrap();
            }
        }
        assert_eq!(c, d);
        assert_eq!(c.params().len(), TrustRegionConfig::PARAM_KEYS.len());
        for ((k, _), key) in c.params().iter().zip(TrustRegionConfig::PARAM_KEYS) {
            assert_eq!(*k, key);
        }
    }

    #[test]
    fn unknown_key_and_bad_value() {
        let mut c = TrustRegionConfig::default();
        assert_eq!(c.set_param("bogus", "1"), Err(ConfigError::UnknownKey("bogus".into())));
        assert!(matches!(c.set_param("mu", "abc"), Err(ConfigError::BadValue { .. })));
    }

    #[test]
    fn policy_names() {
        for p in Policy::ALL {
            assert_eq!(p.name().parse::<Policy>().unwrap(), p);
        }
        assert!("nope".parse::<Policy>().is_err());
        assert!(Policy::Natr.adaptive_shrink());
        assert!(!Policy::IatrMonotone.adaptive_shrink());
    }
}
