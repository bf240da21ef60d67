use std::fs;

use natr_cli::{run_cli_with, EXIT_BUDGET, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("natr").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn list_problems_shows_table_dims() {
    let (code, out, _) = run(&["list-problems"]);
    assert_eq!(code, EXIT_OK);
    let line = out.lines().find(|l| l.starts_with("SROSENBR")).expect("SROSENBR listed");
    assert!(line.contains("100, 500, 1000, 5000"), "{line}");
    assert!(out.lines().count() > 20);
}

#[test]
fn solve_srosenbr_converges() {
    let (code, out, err) = run(&["solve", "--problem", "SROSENBR", "--dim", "100", "--policy", "natr"]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    assert!(out.contains("status=converged"));
    for field in ["iters=", "fevals=", "f=", "gnorm="] {
        assert!(out.contains(field), "{out}");
    }
}

#[test]
fn missing_dim_is_a_usage_error() {
    let (code, out, err) = run(&["solve", "--problem", "SROSENBR"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("--dim"), "{err}");
}

#[test]
fn other_usage_errors() {
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["list-problems", "--colour"]).0, EXIT_USAGE);
    let base = ["solve", "--problem", "SROSENBR", "--dim", "10"];
    let with = |extra: &[&'static str]| [&base[..], extra].concat();
    assert_eq!(run(&with(&["--policy", "newton"])).0, EXIT_USAGE);
    assert_eq!(run(&with(&["--param", "bogus=1"])).0, EXIT_USAGE);
    assert_eq!(run(&with(&["--param", "mu"])).0, EXIT_USAGE);
    assert_eq!(run(&with(&["--param", "alpha0=0.9"])).0, EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "NOPE", "--dim", "10"]).0, EXIT_USAGE);
    assert_eq!(run(&["solve", "--problem", "SROSENBR", "--dim", "7"]).0, EXIT_USAGE);
}

#[test]
fn print_config_shows_defaults() {
    let (code, out, _) = run(&["solve", "--problem", "SROSENBR", "--dim", "10", "--print-config"]);
    assert_eq!(code, EXIT_OK);
    for line in [
        "N = 10", "mu = 0.01", "delta_bar = 100", "gamma = 1.7", "alpha0 = 0.15", "alpha1 = 0.35",
        "N_bar = 10", "I_bar = 3", "nu = 0.25", "c_fixed = 0.35", "eps_rel = 0.000001",
    ] {
        assert!(out.lines().any(|l| l == line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn budget_exhaustion_exits_2() {
    let (code, out, _) = run(&[
        "solve", "--problem", "SROSENBR", "--dim", "100", "--param", "max_iters=3",
    ]);
    assert_eq!(code, EXIT_BUDGET, "{out}");
    assert!(out.contains("status=max-iters"), "{out}");
}

#[test]
fn trace_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.txt");
    let (code, _, _) = run(&[
        "solve", "--problem", "DQDRTIC", "--dim", "20", "--policy", "niatr1",
        "--trace", path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&path).unwrap();
    let records = natr::solver::read_trace(text.as_bytes()).unwrap();
    assert!(!records.is_empty());
    assert!(records.windows(2).all(|w| w[1].k == w[0].k + 1));
}

#[test]
fn bench_then_profile() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.txt");
    fs::write(&suite, "# tiny suite\nDQDRTIC 20\nSROSENBR 10  # two-by-two blocks\n").unwrap();
    let out_dir = dir.path().join("out");
    let (code, out, err) = run(&[
        "bench", "--suite", suite.to_str().unwrap(), "--out", out_dir.to_str().unwrap(),
        "--parallel", "2", "--no-warmup",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("natr"));
    let records = out_dir.join("records.csv");
    let text = fs::read_to_string(&records).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 4);

    let (code, out, err) = run(&[
        "profile", "--records", records.to_str().unwrap(), "--index", "iters",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("rho(1)="));
    let csv = fs::read_to_string(out_dir.join("profile_iters.csv")).unwrap();
    assert!(csv.starts_with("solver,tau,rho\n"));
    let svg = fs::read_to_string(out_dir.join("profile_iters.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.contains("</svg>"));
}

#[test]
fn bench_and_profile_report_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    let out_dir = dir.path().join("out");
    let (code, _, err) = run(&[
        "bench", "--suite", missing.to_str().unwrap(), "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("missing.txt"), "{err}");

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "not,a,records,file\n").unwrap();
    let (code, _, _) = run(&[
        "profile", "--records", bad.to_str().unwrap(), "--index", "fevals", "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_FAILURE);
    assert_eq!(run(&["profile", "--records", "x", "--index", "speed", "--out", "y"]).0, EXIT_USAGE);
}

#[test]
fn check_grad_passes_on_registered_problem() {
    let (code, out, _) = run(&["check-grad", "--problem", "WOODS", "--dim", "8"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("max_rel_err="));
}

#[test]
fn output_has_no_escape_codes() {
    let (_, out, _) = run(&["list-problems"]);
    let (_, _, err) = run(&["solve"]);
    assert!(!out.contains('\u{1b}') && !err.contains('\u{1b}'));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_natr");
    let status = std::process::Command::new(bin)
        .args(["solve", "--problem", "SROSENBR"])
        .env("NO_COLOR", "1")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&status.stderr).contains("Usage"));
}
