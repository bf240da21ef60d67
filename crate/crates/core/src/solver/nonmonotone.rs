//! Reference values for the nonmonotone ratio test.

use std::collections::VecDeque;

use super::config::{Policy, TrustRegionConfig};

/// Recent objective values plus the counters that drive the NATR reference.
///
/// `m` grows while the current value stays within a relative gap `nu` of the
/// windowed max and resets to zero otherwise; `i` counts consecutive
/// non-decreasing accepted steps.
#[derive(Debug, Clone, PartialEq)]
pub struct NonmonotoneState {
    history: VecDeque<f64>,
    capacity: usize,
    m: usize,
    i: usize,
    k: usize,
}

impl NonmonotoneState {
    pub fn new(f0: f64, cfg: &TrustRegionConfig) -> Self {
        let capacity = cfg.window.max(cfg.window_cap) + 1;
        let mut history = VecDeque::with_capacity(capacity);
        history.push_back(f0);
        NonmonotoneState {
            history,
            capacity,
            m: 0,
            i: 0,
            k: 0,
        }
    }

    /// Builds a state directly; `history` is oldest first and its last entry is `f_k`.
    pub fn from_parts(history: &[f64], m: usize, i: usize, k: usize, cfg: &TrustRegionConfig) -> Self {
        assert!(!history.is_empty());
        let capacity = cfg.window.max(cfg.window_cap) + 1;
        let skip = history.len().saturating_sub(capacity);
        NonmonotoneState {
            history: history[skip..].iter().copied().collect(),
            capacity,
            m,
            i,
            k,
        }
    }

    pub fn iteration(&self) -> usize {
        self.k
    }

    pub fn window_counter(&self) -> usize {
        self.m
    }

    pub fn increase_counter(&self) -> usize {
        self.i
    }

    pub fn current(&self) -> f64 {
        *self.history.back().expect("history is never empty")
    }

    pub fn history(&self) -> impl Iterator<Item = f64> + '_ {
        self.history.iter().copied()
    }

    /// Max of the newest `len + 1` stored values.
    fn recent_max(&self, len: usize) -> f64 {
        self.history
            .iter()
            .rev()
            .take(len + 1)
            .fold(f64::NEG_INFINITY, |a, &b| a.max(b))
    }

    /// `f_l = max_{0 <= j <= min(k, N)} f_{k-j}`.
    pub fn window_max(&self, cfg: &TrustRegionConfig) -> f64 {
        self.recent_max(self.k.min(cfg.window))
    }

    /// Records the newly accepted value `f_new` and advances the counters.
    pub fn update_counters(&mut self, f_new: f64, cfg: &TrustRegionConfig) {
        let prev = self.current();
        if self.history.len() == self.capacity {
            self.history.pop_front();
        }
        self.history.push_back(f_new);
        self.k += 1;

        self.i = if f_new < prev { 0 } else { self.i + 1 };
        let gap = self.window_max(cfg) - f_new;
        self.m = if gap > cfg.nu * f_new.abs() { 0 } else { self.m + 1 };
    }

    /// `mu_k` of the relaxed reference.
    pub fn relax_weight(&self, cfg: &TrustRegionConfig) -> f64 {
        cfg.relax_scale / ((self.k + 1) as f64).powf(cfg.relax_power)
    }

    /// The reference value `C_k` used in the ratio numerator.
    pub fn reference_value(&self, cfg: &TrustRegionConfig) -> f64 {
        let fk = self.current();
        match cfg.policy {
            Policy::Monotone | Policy::IatrMonotone => fk,
            Policy::Natr => {
                if self.i <= cfg.increase_cap {
                    self.recent_max(self.m.min(cfg.window_cap))
                } else {
                    fk
                }
            }
            Policy::MaxWindow => self.blended(cfg),
            Policy::RelaxedMax => {
                let r = self.blended(cfg);
                let phi = if r > 0.0 { self.relax_weight(cfg) } else { 0.0 };
                (1.0 + phi) * r
            }
        }
    }

    fn blended(&self, cfg: &TrustRegionConfig) -> f64 {
        cfg.eta * self.window_max(cfg) + (1.0 - cfg.eta) * self.current()
    }
}
