//! Dolan-More performance profiles.
//!
//! For each retained problem the cost ratio of a solver is its cost divided by
//! the best cost on that problem; failures have ratio `+inf`. `rho_s(tau)` is
//! the fraction of retained problems with ratio at most `tau`. Problems that
//! every solver failed are dropped before the ratios are formed.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{BenchError, RunRecord};

/// Smallest time charged to a run, so instantaneous runs still have a ratio.
const MIN_SECONDS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostIndex {
    Fevals,
    Iters,
    Time,
}

impl CostIndex {
    pub fn name(self) -> &'static str {
        match self {
            CostIndex::Fevals => "fevals",
            CostIndex::Iters => "iters",
            CostIndex::Time => "time",
        }
    }

    /// Cost of a run, or `None` for a failure. Zero iteration counts are
    /// charged as one.
    pub fn cost(self, r: &RunRecord) -> Option<f64> {
        if !r.solved() {
            return None;
        }
        Some(match self {
            CostIndex::Fevals => r.fevals.max(1) as f64,
            CostIndex::Iters => r.iters.max(1) as f64,
            CostIndex::Time => r.wall_time.max(MIN_SECONDS),
        })
    }
}

impl fmt::Display for CostIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostIndex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fevals" => Ok(CostIndex::Fevals),
            "iters" => Ok(CostIndex::Iters),
            "time" => Ok(CostIndex::Time),
            _ => Err(format!("unknown index `{s}` (expected fevals, iters or time)")),
        }
    }
}

/// Step function `rho_s(tau)` of one solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub solver: String,
    /// `(tau, rho)` at every distinct finite ratio, `tau` ascending.
    pub points: Vec<(f64, f64)>,
}

impl ProfileCurve {
    /// Evaluates the right-continuous step function at `tau`.
    pub fn rho_at(&self, tau: f64) -> f64 {
        self.points
            .iter()
            .take_while(|(t, _)| *t <= tau)
            .last()
            .map_or(0.0, |&(_, r)| r)
    }

    /// `rho(inf)`, the fraction of retained problems this solver solved.
    pub fn solved_fraction(&self) -> f64 {
        self.points.last().map_or(0.0, |&(_, r)| r)
    }
}

/// Profiles from a cost table: `costs[p][s]` is the cost of solver `s` on
/// problem `p`, `None` for a failure. Costs must be positive.
pub fn profile_from_costs(solvers: &[String], costs: &[Vec<Option<f64>>]) -> Vec<ProfileCurve> {
    let retained: Vec<&Vec<Option<f64>>> = costs
        .iter()
        .filter(|row| row.iter().any(Option::is_some))
        .collect();
    let n_problems = retained.len();

    let ratios: Vec<Vec<f64>> = retained
        .iter()
        .map(|row| {
            debug_assert_eq!(row.len(), solvers.len());
            let best = row.iter().flatten().fold(f64::INFINITY, |a, &b| a.min(b));
            row.iter()
                .map(|c| c.map_or(f64::INFINITY, |c| c / best))
                .collect()
        })
        .collect();

    let mut grid: Vec<f64> = ratios.iter().flatten().copied().filter(|r| r.is_finite()).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    solvers
        .iter()
        .enumerate()
        .map(|(s, name)| {
            let mut mine: Vec<f64> = ratios.iter().map(|row| row[s]).collect();
            mine.sort_by(f64::total_cmp);
            let mut count = 0;
            let points = grid
                .iter()
                .map(|&tau| {
                    while count < mine.len() && mine[count] <= tau {
                        count += 1;
                    }
                    (tau, count as f64 / n_problems as f64)
                })
                .collect();
            ProfileCurve { solver: name.clone(), points }
        })
        .collect()
}

/// Profiles from run records. Every (problem, solver) pair must appear exactly once.
pub fn performance_profile(records: &[RunRecord], index: CostIndex) -> Result<Vec<ProfileCurve>, BenchError> {
    let mut solvers: Vec<String> = Vec::new();
    let mut problems: Vec<(String, usize)> = Vec::new();
    for r in records {
        if !solvers.contains(&r.solver) {
            solvers.push(r.solver.clone());
        }
        let key = (r.problem.clone(), r.dim);
        if !problems.contains(&key) {
            problems.push(key);
        }
    }

    let mut table: HashMap<(&str, usize, &str), &RunRecord> = HashMap::new();
    for r in records {
        if table.insert((&r.problem, r.dim, &r.solver), r).is_some() {
            return Err(BenchError::DuplicateRecord {
                problem: format!("{} (n={})", r.problem, r.dim),
                solver: r.solver.clone(),
            });
        }
    }

    let mut costs = Vec::with_capacity(problems.len());
    for (name, dim) in &problems {
        let mut row = Vec::with_capacity(solvers.len());
        for s in &solvers {
            let rec = table.get(&(name.as_str(), *dim, s.as_str())).ok_or_else(|| {
                BenchError::MissingRecord {
                    problem: format!("{name} (n={dim})"),
                    solver: s.clone(),
                }
            })?;
            row.push(index.cost(rec));
        }
        costs.push(row);
    }
    Ok(profile_from_costs(&solvers, &costs))
}
