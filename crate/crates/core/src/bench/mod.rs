//! Solver-by-problem benchmark grid and Dolan-More performance profiles.

mod export;
mod profile;

use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

pub use export::{
    read_records_csv, records_from_csv, records_to_csv, curves_to_csv, profile_svg,
    write_curves_csv, write_profile_svg, write_records_csv,
};
pub use profile::{performance_profile, profile_from_costs, CostIndex, ProfileCurve};

use crate::problems::{self, Problem, ProblemError};
use crate::quasinewton::HessianApprox;
use crate::solver::{self, ConfigError, Policy, Status, TrustRegionConfig};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("suite line {line}: {reason}")]
    Suite { line: usize, reason: String },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("solver {solver}: {source}")]
    Config {
        solver: String,
        #[source]
        source: ConfigError,
    },
    #[error("duplicate record for problem {problem} and solver {solver}")]
    DuplicateRecord { problem: String, solver: String },
    #[error("no record for problem {problem} and solver {solver}")]
    MissingRecord { problem: String, solver: String },
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error("{0}")]
    Empty(&'static str),
}

/// Outcome of one (problem, solver) run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub problem: String,
    pub dim: usize,
    pub solver: String,
    pub status: Status,
    pub iters: usize,
    pub fevals: usize,
    pub wall_time: f64,
}

impl RunRecord {
    pub fn solved(&self) -> bool {
        self.status == Status::Converged
    }

    /// Same record without the timing, for determinism comparisons.
    pub fn counts(&self) -> (&str, usize, &str, Status, usize, usize) {
        (&self.problem, self.dim, &self.solver, self.status, self.iters, self.fevals)
    }
}

/// A named solver configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSpec {
    pub name: String,
    pub config: TrustRegionConfig,
}

impl SolverSpec {
    pub fn new(name: impl Into<String>, config: TrustRegionConfig) -> Self {
        SolverSpec { name: name.into(), config }
    }

    pub fn from_policy(policy: Policy) -> Self {
        Self::new(policy.name(), TrustRegionConfig::with_policy(policy))
    }
}

/// Budget override applied to every solver of a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_iters: usize,
    pub max_fevals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Worker threads; 1 runs everything on the calling thread.
    pub parallelism: usize,
    /// Run every pair once untimed before the timed run.
    pub warmup: bool,
    pub budget: Option<Budget>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            parallelism: 1,
            warmup: true,
            budget: None,
        }
    }
}

fn run_one(p: &Problem, spec: &SolverSpec, cfg: &TrustRegionConfig, warmup: bool) -> RunRecord {
    let once = || {
        let hess = HessianApprox::with_norm_cap(p.dim(), cfg.norm_cap)
            .expect("problems have positive dimension");
        solver::solve(p, cfg, hess).expect("config validated and dimensions match")
    };
    if warmup {
        once();
    }
    let r = once();
    RunRecord {
        problem: p.name().to_string(),
        dim: p.dim(),
        solver: spec.name.clone(),
        status: r.status,
        iters: r.iters,
        fevals: r.fevals,
        wall_time: r.wall_time,
    }
}

/// Runs every solver on every problem.
///
/// Records come back ordered by problem, then solver, in input order,
/// regardless of `parallelism`.
pub fn run_suite(
    problems: &[Problem],
    solvers: &[SolverSpec],
    opts: &SuiteOptions,
) -> Result<Vec<RunRecord>, BenchError> {
    if problems.is_empty() {
        return Err(BenchError::Empty("problem list is empty"));
    }
    if solvers.is_empty() {
        return Err(BenchError::Empty("solver list is empty"));
    }
    let configs: Vec<TrustRegionConfig> = solvers
        .iter()
        .map(|s| {
            let mut cfg = s.config.clone();
            if let Some(b) = opts.budget {
                cfg.max_iters = b.max_iters;
                cfg.max_fevals = b.max_fevals;
            }
            cfg.record_trace = false;
            cfg.validate().map(|_| cfg).map_err(|source| BenchError::Config {
                solver: s.name.clone(),
                source,
            })
        })
        .collect::<Result<_, _>>()?;

    let pairs: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|i| (0..solvers.len()).map(move |j| (i, j)))
        .collect();
    let job = |&(i, j): &(usize, usize)| run_one(&problems[i], &solvers[j], &configs[j], opts.warmup);

    if opts.parallelism <= 1 {
        return Ok(pairs.iter().map(job).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism)
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    Ok(pool.install(|| pairs.par_iter().map(job).collect()))
}

/// Parses a suite description: one `NAME DIM` pair per line, `#` starts a comment.
pub fn parse_suite(text: &str) -> Result<Vec<(String, usize)>, BenchError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| BenchError::Suite { line: idx + 1, reason };
        let mut parts = line.split_whitespace();
        let (Some(name), Some(dim), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected `NAME DIM`, got `{line}`")));
        };
        let dim = dim.parse().map_err(|_| err(format!("bad dimension `{dim}`")))?;
        out.push((name.to_string(), dim));
    }
    Ok(out)
}

/// Builds the problems named by a suite description.
pub fn load_suite(text: &str) -> Result<Vec<Problem>, BenchError> {
    parse_suite(text)?
        .into_iter()
        .map(|(name, dim)| problems::make_problem(&name, dim).map_err(BenchError::from))
        .collect()
}
