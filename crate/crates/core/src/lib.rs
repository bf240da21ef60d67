//! Nonmonotone adaptive trust-region minimization.
//!
//! The crate is organised around the pieces of one outer iteration:
//!
//! - [`problems`]: smooth test objectives with analytic gradients and a
//!   finite-difference gradient checker.
//! - [`subproblem`]: the Steihaug-Toint truncated conjugate-gradient solver for
//!   the quadratic model restricted to a ball.
//! - [`quasinewton`]: a dense, safeguarded MBFGS Hessian approximation.
//! - [`solver`]: the driver, with the adaptive initial radius, the
//!   radius-dependent shrinkage and four reference-value policies.
//! - [`bench`]: suite runner, Dolan-More performance profiles and CSV/SVG export.
//!
//! ```
//! use natr::{problems, solver, quasinewton::HessianApprox};
//!
//! let p = problems::make_problem("SROSENBR", 10).unwrap();
//! let cfg = solver::TrustRegionConfig::default();
//! let res = solver::solve(&p, &cfg, HessianApprox::identity(p.dim()).unwrap()).unwrap();
//! assert_eq!(res.status, solver::Status::Converged);
//! ```

pub mod bench;
pub mod linalg;
pub mod problems;
pub mod quasinewton;
pub mod solver;
pub mod subproblem;

mod clock;

pub use problems::{make_problem, Problem};
pub use quasinewton::HessianApprox;
pub use solver::{solve, Policy, RunResult, Status, TrustRegionConfig};
