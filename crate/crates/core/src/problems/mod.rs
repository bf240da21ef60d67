//! Test objectives with analytic gradients.
//!
//! Every family follows the usual CUTEst / Moré-Garbow-Hillstrom definition and
//! standard start point. Families are looked up by name through
//! [`make_problem`]; [`registry`] enumerates them with the dimensions they are
//! usually run at.

mod functions;
mod gradcheck;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use gradcheck::{check_gradient, check_gradient_random, GradCheckReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("unknown problem `{0}`")]
    UnknownName(String),
    #[error("{name} does not support n = {dim}: {constraint}")]
    UnsupportedDimension {
        name: String,
        dim: usize,
        constraint: String,
    },
    #[error("point has {got} entries but the problem dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("objective or gradient is not finite at the evaluation point")]
    EvaluationFailure,
}

/// A smooth objective `f: R^n -> R` with its gradient.
///
/// Implementations must be pure: identical inputs give bit-identical outputs.
pub trait Objective: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Overwrites `g` with the gradient at `x`.
    fn gradient(&self, x: &[f64], g: &mut [f64]);
}

struct FnObjective<F, G> {
    f: F,
    g: G,
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        (self.g)(x, g)
    }
}

/// A named objective together with its start point.
#[derive(Clone)]
pub struct Problem {
    name: String,
    x0: Vec<f64>,
    objective: Arc<dyn Objective>,
    minimizer: Option<(Vec<f64>, f64)>,
}

impl Problem {
    /// Wraps an arbitrary objective. Panics if `x0` is empty.
    pub fn new(name: impl Into<String>, x0: Vec<f64>, objective: Arc<dyn Objective>) -> Self {
        assert!(!x0.is_empty(), "problem dimension must be at least 1");
        Problem {
            name: name.into(),
            x0,
            objective,
            minimizer: None,
        }
    }

    /// Builds a problem from a value closure and an in-place gradient closure.
    pub fn from_fns<F, G>(name: impl Into<String>, x0: Vec<f64>, f: F, g: G) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        Self::new(name, x0, Arc::new(FnObjective { f, g }))
    }

    /// Attaches a known global minimizer and optimal value.
    pub fn with_minimizer(mut self, x: Vec<f64>, f: f64) -> Self {
        assert_eq!(x.len(), self.x0.len());
        self.minimizer = Some((x, f));
        self
    }

    /// Same objective, different start point.
    pub fn with_start(mut self, x0: Vec<f64>) -> Self {
        assert_eq!(x0.len(), self.x0.len());
        self.x0 = x0;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn known_minimum(&self) -> Option<(&[f64], f64)> {
        self.minimizer.as_ref().map(|(x, f)| (x.as_slice(), *f))
    }

    pub fn eval_f(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        self.objective.value(x)
    }

    pub fn eval_g(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.eval_g_into(x, &mut g);
        g
    }

    pub fn eval_g_into(&self, x: &[f64], g: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        g.iter_mut().for_each(|v| *v = 0.0);
        self.objective.gradient(x, g);
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .finish_non_exhaustive()
    }
}

/// Structural constraint on the dimension of a variable-size family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimRule {
    AtLeast(usize),
    MultipleOf { factor: usize, min: usize },
}

impl DimRule {
    pub fn admits(self, n: usize) -> bool {
        match self {
            DimRule::AtLeast(m) => n >= m,
            DimRule::MultipleOf { factor, min } => n >= min && n.is_multiple_of(factor),
        }
    }

    /// Smallest admissible dimension.
    pub fn smallest(self) -> usize {
        match self {
            DimRule::AtLeast(m) => m,
            DimRule::MultipleOf { factor, min } => min.div_ceil(factor) * factor,
        }
    }
}

impl fmt::Display for DimRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimRule::AtLeast(m) => write!(f, "n must be at least {m}"),
            DimRule::MultipleOf { factor, min } => {
                write!(f, "n must be a multiple of {factor} and at least {min}")
            }
        }
    }
}

/// One registered family.
#[derive(Debug, Clone, Copy)]
pub struct Family {
    pub name: &'static str,
    /// Dimensions the family is listed at in the reference benchmark.
    pub table_dims: &'static [usize],
    pub rule: DimRule,
    build: fn(&str, usize) -> Problem,
}

impl Family {
    pub fn smallest_table_dim(&self) -> usize {
        self.table_dims[0]
    }
}

const DIMS_4: &[usize] = &[100, 500, 1000, 5000];
const DIXMAAN_DIMS: &[usize] = &[300, 1500, 3000];

macro_rules! dixmaan {
    ($($name:literal),*) => {
        [$(Family {
            name: $name,
            table_dims: DIXMAAN_DIMS,
            rule: DimRule::MultipleOf { factor: 3, min: 3 },
            build: functions::dixmaan,
        }),*]
    };
}

static FAMILIES: &[Family] = &[
    Family { name: "ARWHEAD", table_dims: DIMS_4, rule: DimRule::AtLeast(2), build: functions::arwhead },
    Family { name: "BDQRTIC", table_dims: DIMS_4, rule: DimRule::AtLeast(5), build: functions::bdqrtic },
    Family { name: "COSINE", table_dims: &[100, 1000], rule: DimRule::AtLeast(2), build: functions::cosine },
    Family { name: "CRAGGLVY", table_dims: DIMS_4, rule: DimRule::MultipleOf { factor: 2, min: 4 }, build: functions::cragglvy },
    Family { name: "DIXON3DQ", table_dims: &[100, 1000], rule: DimRule::AtLeast(2), build: functions::dixon3dq },
    Family { name: "DQDRTIC", table_dims: DIMS_4, rule: DimRule::AtLeast(3), build: functions::dqdrtic },
    Family { name: "DQRTIC", table_dims: DIMS_4, rule: DimRule::AtLeast(1), build: functions::quartic },
    Family { name: "EDENSCH", table_dims: &[2000], rule: DimRule::AtLeast(2), build: functions::edensch },
    Family { name: "ENGVAL1", table_dims: &[100, 1000, 5000], rule: DimRule::AtLeast(2), build: functions::engval1 },
    Family { name: "FREUROTH", table_dims: DIMS_4, rule: DimRule::AtLeast(2), build: functions::freuroth },
    Family { name: "LIARWHD", table_dims: DIMS_4, rule: DimRule::AtLeast(1), build: functions::liarwhd },
    Family { name: "NONDIA", table_dims: DIMS_4, rule: DimRule::AtLeast(2), build: functions::nondia },
    Family { name: "NONSCOMP", table_dims: DIMS_4, rule: DimRule::AtLeast(2), build: functions::nonscomp },
    Family { name: "POWELLSG", table_dims: DIMS_4, rule: DimRule::MultipleOf { factor: 4, min: 4 }, build: functions::powellsg },
    Family { name: "POWER", table_dims: DIMS_4, rule: DimRule::AtLeast(1), build: functions::power },
    Family { name: "QUARTC", table_dims: DIMS_4, rule: DimRule::AtLeast(1), build: functions::quartic },
    Family { name: "SROSENBR", table_dims: DIMS_4, rule: DimRule::MultipleOf { factor: 2, min: 2 }, build: functions::srosenbr },
    Family { name: "TRIDIA", table_dims: DIMS_4, rule: DimRule::AtLeast(1), build: functions::tridia },
    Family { name: "WOODS", table_dims: &[100, 1000, 4000], rule: DimRule::MultipleOf { factor: 4, min: 4 }, build: functions::woods },
];

static DIXMAAN_FAMILIES: [Family; 12] = dixmaan!(
    "DIXMAANA", "DIXMAANB", "DIXMAANC", "DIXMAAND", "DIXMAANE", "DIXMAANF",
    "DIXMAANG", "DIXMAANH", "DIXMAANI", "DIXMAANJ", "DIXMAANK", "DIXMAANL"
);

/// All registered families, sorted by name.
pub fn registry() -> Vec<&'static Family> {
    let mut all: Vec<&'static Family> = FAMILIES.iter().chain(DIXMAAN_FAMILIES.iter()).collect();
    all.sort_by_key(|f| f.name);
    all
}

pub fn find_family(name: &str) -> Option<&'static Family> {
    FAMILIES
        .iter()
        .chain(DIXMAAN_FAMILIES.iter())
        .find(|f| f.name.eq_ignore_ascii_case(name))
}

/// Instantiates family `name` at dimension `dim`.
pub fn make_problem(name: &str, dim: usize) -> Result<Problem, ProblemError> {
    let family = find_family(name).ok_or_else(|| ProblemError::UnknownName(name.to_string()))?;
    if !family.rule.admits(dim) {
        return Err(ProblemError::UnsupportedDimension {
            name: family.name.to_string(),
            dim,
            constraint: family.rule.to_string(),
        });
    }
    Ok((family.build)(family.name, dim))
}

/// Every family at its smallest listed benchmark dimension.
pub fn default_suite() -> Vec<Problem> {
    registry()
        .into_iter()
        .map(|f| (f.build)(f.name, f.smallest_table_dim()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn srosenbr_start_value_n4() {
        let p = make_problem("SROSENBR", 4).unwrap();
        assert_eq!(p.x0(), &[-1.2, 1.0, -1.2, 1.0]);
        assert_close(p.eval_f(p.x0()), 48.4, 1e-12);
    }

    #[test]
    fn srosenbr_start_pattern_n100() {
        let p = make_problem("SROSENBR", 100).unwrap();
        assert_eq!(p.dim(), 100);
        for (i, v) in p.x0().iter().enumerate() {
            assert_eq!(*v, if i % 2 == 0 { -1.2 } else { 1.0 });
        }
        assert_close(p.eval_f(p.x0()), 50.0 * 24.2, 1e-9);
    }

    #[test]
    fn srosenbr_all_ones_is_stationary() {
        let p = make_problem("SROSENBR", 100).unwrap();
        let x = vec![1.0; 100];
        assert_eq!(p.eval_f(&x), 0.0);
        assert!(p.eval_g(&x).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dqdrtic_origin() {
        let p = make_problem("DQDRTIC", 100).unwrap();
        let x = vec![0.0; 100];
        assert_eq!(p.eval_f(&x), 0.0);
        assert!(p.eval_g(&x).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unknown_name() {
        assert_eq!(
            make_problem("NOSUCHNAME", 100).unwrap_err(),
            ProblemError::UnknownName("NOSUCHNAME".into())
        );
    }

    #[test]
    fn dimension_constraints_are_named() {
        let err = make_problem("DIXMAANA", 100).unwrap_err();
        match err {
            ProblemError::UnsupportedDimension { constraint, .. } => {
                assert!(constraint.contains("multiple of 3"), "{constraint}")
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(make_problem("WOODS", 6).is_err());
        assert!(make_problem("SROSENBR", 3).is_err());
        assert!(make_problem("BDQRTIC", 4).is_err());
        assert!(make_problem("LIARWHD", 0).is_err());
    }

    #[test]
    fn registry_lists_table_dims() {
        let reg = registry();
        assert!(reg.len() >= 31);
        let sr = reg.iter().find(|f| f.name == "SROSENBR").unwrap();
        assert_eq!(sr.table_dims, &[100, 500, 1000, 5000]);
        for f in &reg {
            assert!(f.rule.admits(f.smallest_table_dim()), "{}", f.name);
            for &d in f.table_dims {
                assert!(f.rule.admits(d), "{} at {d}", f.name);
            }
        }
    }

    #[test]
    fn names_are_case_insensitive() {
        assert_eq!(make_problem("srosenbr", 2).unwrap().name(), "SROSENBR");
    }

    #[test]
    fn known_minima() {
        let cases = [
            ("SROSENBR", 10),
            ("WOODS", 8),
            ("DQDRTIC", 10),
            ("TRIDIA", 10),
            ("POWELLSG", 8),
            ("LIARWHD", 10),
            ("ARWHEAD", 10),
            ("NONDIA", 10),
            ("DIXON3DQ", 10),
            ("NONSCOMP", 10),
            ("DQRTIC", 10),
            ("QUARTC", 10),
            ("POWER", 10),
        ];
        for (name, n) in cases {
            let p = make_problem(name, n).unwrap();
            let (x, fstar) = p.known_minimum().unwrap_or_else(|| panic!("{name} has no minimizer"));
            assert_close(p.eval_f(x), fstar, 1e-12);
            let g = p.eval_g(x);
            assert!(crate::linalg::norm(&g) <= 1e-10, "{name}: |g| = {}", crate::linalg::norm(&g));
        }
    }

    #[test]
    fn evaluations_are_pure() {
        for fam in registry() {
            let p = make_problem(fam.name, fam.rule.smallest().max(12).next_multiple_of(12)).unwrap();
            let x: Vec<f64> = (0..p.dim()).map(|i| 0.3 * (i as f64).sin() + 0.1).collect();
            assert_eq!(p.eval_f(&x).to_bits(), p.eval_f(&x).to_bits(), "{}", fam.name);
            let (g1, g2) = (p.eval_g(&x), p.eval_g(&x));
            assert!(g1.iter().zip(&g2).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }
}
