//! `natr` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime error or failed gradient check,
//! 2 budget exhausted, 3 numerical failure, 64 usage error.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use natr::bench::{self, Budget, CostIndex, SolverSpec, SuiteOptions};
use natr::problems;
use natr::solver::{self, Policy, Status, TrustRegionConfig};
use natr::HessianApprox;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

const GRADCHECK_TOL: f64 = 1e-5;
const GRADCHECK_STEP: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "natr", version, about = "Nonmonotone adaptive trust-region solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize one test problem.
    Solve {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "natr")]
        policy: Policy,
        /// Override a parameter, e.g. `--param mu=0.05`. Repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Write the per-iteration trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Print the effective configuration before solving.
        #[arg(long)]
        print_config: bool,
    },
    /// Run every policy on a problem suite and write records.csv.
    Bench {
        /// `default` or a file with one `NAME DIM` pair per line.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Comma-separated policies; defaults to iatr,niatr1,niatr2,natr.
        #[arg(long, value_delimiter = ',')]
        policies: Vec<Policy>,
        #[arg(long)]
        max_fevals: Option<usize>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Skip the untimed warm-up run of each pair.
        #[arg(long)]
        no_warmup: bool,
    },
    /// Build performance profiles from a records file.
    Profile {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value = "fevals")]
        index: CostIndex,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare analytic and finite-difference gradients at the start point.
    CheckGrad {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        dim: usize,
    },
    /// List registered problems with their benchmark dimensions.
    ListProblems,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
    /// Downstream reader went away, e.g. `natr list-problems | head`.
    BrokenPipe,
}

impl CliError {
    fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }

    fn output(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            CliError::BrokenPipe
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run_cli`] with explicit output streams. Output is always plain text.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Solve { problem, dim, policy, params, trace, print_config } => {
            cmd_solve(&problem, dim, policy, &params, trace.as_deref(), print_config, out)
        }
        Command::Bench { suite, out: dir, parallel, policies, max_fevals, max_iters, no_warmup } => {
            cmd_bench(&suite, &dir, parallel, &policies, max_iters, max_fevals, !no_warmup, out)
        }
        Command::Profile { records, index, out: dir } => cmd_profile(&records, index, &dir, out),
        Command::CheckGrad { problem, dim } => cmd_check_grad(&problem, dim, out),
        Command::ListProblems => cmd_list(out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(CliError::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
        Err(CliError::BrokenPipe) => EXIT_OK,
    }
}

fn build_config(policy: Policy, params: &[String]) -> Result<TrustRegionConfig, CliError> {
    let mut cfg = TrustRegionConfig::with_policy(policy);
    for kv in params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param expects KEY=VALUE, got `{kv}`")))?;
        cfg.set_param(k.trim(), v).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn exit_code(status: Status) -> i32 {
    match status {
        Status::Converged => EXIT_OK,
        Status::MaxIters | Status::MaxFevals => EXIT_BUDGET,
        Status::NumericalFailure => EXIT_NUMERICAL,
    }
}

fn cmd_solve(
    name: &str,
    dim: usize,
    policy: Policy,
    params: &[String],
    trace: Option<&Path>,
    print_config: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut cfg = build_config(policy, params)?;
    cfg.record_trace = trace.is_some();
    if print_config {
        writeln!(out, "policy = {}", cfg.policy).map_err(CliError::output)?;
        for (k, v) in cfg.params() {
            writeln!(out, "{k} = {v}").map_err(CliError::output)?;
        }
    }
    let p = problems::make_problem(name, dim).map_err(|e| CliError::Usage(e.to_string()))?;
    let hess = HessianApprox::with_norm_cap(p.dim(), cfg.norm_cap).map_err(CliError::runtime)?;
    let res = solver::solve(&p, &cfg, hess).map_err(CliError::runtime)?;

    if let (Some(path), Some(records)) = (trace, res.trace.as_ref()) {
        let file = File::create(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        solver::write_trace(BufWriter::new(file), records)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    }
    writeln!(
        out,
        "{} n={} policy={} status={} iters={} fevals={} f={:.6e} gnorm={:.3e}",
        p.name(),
        p.dim(),
        cfg.policy,
        res.status,
        res.iters,
        res.fevals,
        res.final_f,
        res.final_gnorm
    ).map_err(CliError::output)?;
    if let Some(why) = &res.failure {
        writeln!(out, "failure: {why}").map_err(CliError::output)?;
    }
    Ok(exit_code(res.status))
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    suite: &str,
    dir: &Path,
    parallel: usize,
    policies: &[Policy],
    max_iters: Option<usize>,
    max_fevals: Option<usize>,
    warmup: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let problems = if suite == "default" {
        problems::default_suite()
    } else {
        let text = fs::read_to_string(suite).map_err(|e| CliError::Runtime(format!("{suite}: {e}")))?;
        bench::load_suite(&text).map_err(CliError::runtime)?
    };
    let policies = if policies.is_empty() { &Policy::COMPARED[..] } else { policies };
    let solvers: Vec<SolverSpec> = policies.iter().map(|&p| SolverSpec::from_policy(p)).collect();
    let defaults = TrustRegionConfig::default();
    let budget = (max_iters.is_some() || max_fevals.is_some()).then(|| Budget {
        max_iters: max_iters.unwrap_or(defaults.max_iters),
        max_fevals: max_fevals.unwrap_or(defaults.max_fevals),
    });
    let opts = SuiteOptions { parallelism: parallel.max(1), warmup, budget };
    let records = bench::run_suite(&problems, &solvers, &opts).map_err(CliError::runtime)?;

    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    let path = dir.join("records.csv");
    bench::write_records_csv(&path, &records).map_err(CliError::runtime)?;
    for s in &solvers {
        let failures = records.iter().filter(|r| r.solver == s.name && !r.solved()).count();
        writeln!(out, "{:<9} failures={failures}/{}", s.name, problems.len()).map_err(CliError::output)?;
    }
    writeln!(out, "wrote {}", path.display()).map_err(CliError::output)?;
    Ok(EXIT_OK)
}

fn cmd_profile(records: &Path, index: CostIndex, dir: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let recs = bench::read_records_csv(records).map_err(CliError::runtime)?;
    let curves = bench::performance_profile(&recs, index).map_err(CliError::runtime)?;
    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    let csv_path = dir.join(format!("profile_{index}.csv"));
    let svg_path = dir.join(format!("profile_{index}.svg"));
    bench::write_curves_csv(&csv_path, &curves).map_err(CliError::runtime)?;
    let title = format!("Performance profile ({index})");
    bench::write_profile_svg(&svg_path, &curves, &title, true).map_err(CliError::runtime)?;
    for c in &curves {
        writeln!(out, "{:<9} rho(1)={:.3} rho(inf)={:.3}", c.solver, c.rho_at(1.0), c.solved_fraction()).map_err(CliError::output)?;
    }
    writeln!(out, "wrote {} and {}", csv_path.display(), svg_path.display()).map_err(CliError::output)?;
    Ok(EXIT_OK)
}

fn cmd_check_grad(name: &str, dim: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = problems::make_problem(name, dim).map_err(|e| CliError::Usage(e.to_string()))?;
    let r = problems::check_gradient(&p, p.x0(), GRADCHECK_STEP).map_err(CliError::runtime)?;
    let ok = r.max_rel_err <= GRADCHECK_TOL;
    writeln!(
        out,
        "{} n={} max_rel_err={:.3e} worst_index={} {}",
        p.name(),
        p.dim(),
        r.max_rel_err,
        r.worst_index,
        if ok { "ok" } else { "FAILED" }
    ).map_err(CliError::output)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_list(out: &mut dyn Write) -> Result<i32, CliError> {
    writeln!(out, "{:<10} {:<24} constraint", "name", "dims").map_err(CliError::output)?;
    for f in problems::registry() {
        let dims: Vec<String> = f.table_dims.iter().map(|d| d.to_string()).collect();
        writeln!(out, "{:<10} {:<24} {}", f.name, dims.join(", "), f.rule).map_err(CliError::output)?;
    }
    Ok(EXIT_OK)
}
