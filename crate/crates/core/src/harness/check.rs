//! Self-check suites run by `cgkit check`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::instance::{birkhoff_target, gaussian_point};
use super::pgd::singular_values;
use crate::atoms::Atom;
use crate::error::Result;
use crate::lmo::{
    hungarian, BirkhoffPolytope, EnumeratedVertices, KSparsePolytope, L1Ball, LInfBall, LinearMinimizationOracle,
    NuclearNormBall, OracleAnswer, ProbabilitySimplex,
};
use crate::problems::{ExactGradientOracle, Objective, SquaredDistance, SquaredNorm};
use crate::scalar::{dot, sum, Rational, Scalar};
use crate::solvers::{
    away_frank_wolfe, blended_cg, frank_wolfe, lazified_frank_wolfe, stochastic_fw, Control, RunParams, SolverResult,
    Termination, TrajectoryRecord,
};
use crate::steps::StepRule;

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    /// Name of an oracle whose direction is negated before every query.
    pub corrupt_oracle: Option<String>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
    /// Set for suites whose assertions are exact equalities.
    pub exact: bool,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            total: 0,
            failures: Vec::new(),
            exact: false,
        }
    }

    fn record(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(failure());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub suites: Vec<SuiteResult>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = write!(out, "{}: {}/{} passed", s.name, s.passed, s.total);
            if s.exact {
                let _ = write!(out, " ({} exact equalities, no tolerance)", s.passed);
            }
            out.push('\n');
            for f in s.failures.iter().take(5) {
                let _ = writeln!(out, "  FAIL {f}");
            }
            if s.failures.len() > 5 {
                let _ = writeln!(out, "  ... {} more", s.failures.len() - 5);
            }
        }
        out
    }
}

/// Wrapper answering the negated direction; a deliberately broken oracle.
struct Flipped<L>(L);

impl<S: Scalar, L: LinearMinimizationOracle<S>> LinearMinimizationOracle<S> for Flipped<L> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        let flipped: Vec<S> = direction.iter().map(|d| -d.clone()).collect();
        self.0.extreme_point(&flipped)
    }
}

fn boxed<S: Scalar, L: LinearMinimizationOracle<S> + 'static>(
    lmo: L,
    name: &str,
    corrupt: &Option<String>,
) -> Box<dyn LinearMinimizationOracle<S>> {
    if corrupt.as_deref() == Some(name) {
        Box::new(Flipped(lmo))
    } else {
        Box::new(lmo)
    }
}

/// Oracle names accepted by `CheckOptions::corrupt_oracle`.
pub const ORACLE_NAMES: [&str; 8] = [
    "probability-simplex",
    "l1-ball",
    "linf-ball",
    "k-sparse",
    "birkhoff",
    "rational-simplex",
    "rational-l1-ball",
    "nuclear-norm",
];

pub fn check(options: &CheckOptions) -> CheckReport {
    CheckReport {
        suites: vec![
            oracle_suite(options),
            hungarian_suite(options.seed),
            invariant_suite(options.seed),
            rational_suite(),
        ],
    }
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn random_rational_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::from_ratio(rng.random_range(-50..=50), rng.random_range(1..=12)))
        .collect()
}

fn float_matches(oracle: f64, reference: f64) -> bool {
    (oracle - reference).abs() <= 1e-12 * reference.abs().max(1.0)
}

fn compare_float(
    suite: &mut SuiteResult,
    name: &str,
    lmo: &dyn LinearMinimizationOracle<f64>,
    reference: &EnumeratedVertices<f64>,
    rng: &mut ChaCha8Rng,
    count: usize,
) {
    for k in 0..count {
        let d = random_direction(rng, lmo.dim());
        let value = lmo.compute_extreme_point(&d).and_then(|a| a.inner(&d));
        let best = reference.compute_extreme_point(&d).and_then(|a| a.inner(&d));
        match (value, best) {
            (Ok(v), Ok(b)) => suite.record(float_matches(v, b), || {
                format!(
                    "{name} (dim {}): direction {k} gives {v:e}, enumeration {b:e}",
                    lmo.dim()
                )
            }),
            (Err(e), _) | (_, Err(e)) => suite.record(false, || format!("{name}: {e}")),
        }
    }
}

fn compare_exact(
    suite: &mut SuiteResult,
    name: &str,
    lmo: &dyn LinearMinimizationOracle<Rational>,
    reference: &EnumeratedVertices<Rational>,
    rng: &mut ChaCha8Rng,
    count: usize,
) {
    for k in 0..count {
        let d = random_rational_direction(rng, lmo.dim());
        let value = lmo.compute_extreme_point(&d).and_then(|a| a.inner(&d));
        let best = reference.compute_extreme_point(&d).and_then(|a| a.inner(&d));
        match (value, best) {
            (Ok(v), Ok(b)) => suite.record(v == b, || format!("{name}: direction {k} gives {v}, enumeration {b}")),
            (Err(e), _) | (_, Err(e)) => suite.record(false, || format!("{name}: {e}")),
        }
    }
}

fn oracle_suite(options: &CheckOptions) -> SuiteResult {
    let corrupt = &options.corrupt_oracle;
    let mut suite = SuiteResult::new("oracles");
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let push_err = |suite: &mut SuiteResult, name: &str, e: crate::error::Error| {
        suite.record(false, || format!("{name}: {e}"));
    };
    for dim in [1, 3, 8] {
        for (name, lmo, reference) in [
            (
                "probability-simplex",
                boxed(ProbabilitySimplex::new(dim, 1.5), "probability-simplex", corrupt),
                EnumeratedVertices::simplex(dim, 1.5),
            ),
            (
                "l1-ball",
                boxed(L1Ball::new(dim, 2.0), "l1-ball", corrupt),
                EnumeratedVertices::l1_ball(dim, 2.0),
            ),
            (
                "linf-ball",
                boxed(LInfBall::new(dim, 0.5), "linf-ball", corrupt),
                EnumeratedVertices::linf_ball(dim, 0.5),
            ),
        ] {
            match reference {
                Ok(reference) => compare_float(&mut suite, name, lmo.as_ref(), &reference, &mut rng, 100),
                Err(e) => push_err(&mut suite, name, e),
            }
        }
    }
    match (KSparsePolytope::new(6, 2, 1.0), EnumeratedVertices::ksparse(6, 2, 1.0)) {
        (Ok(lmo), Ok(reference)) => {
            let lmo = boxed(lmo, "k-sparse", corrupt);
            compare_float(&mut suite, "k-sparse", lmo.as_ref(), &reference, &mut rng, 100);
        }
        (Err(e), _) | (_, Err(e)) => push_err(&mut suite, "k-sparse", e),
    }
    for n in [2, 3, 5] {
        match EnumeratedVertices::birkhoff(n) {
            Ok(reference) => {
                let lmo = boxed(BirkhoffPolytope::new(n), "birkhoff", corrupt);
                compare_float(&mut suite, "birkhoff", lmo.as_ref(), &reference, &mut rng, 100);
            }
            Err(e) => push_err(&mut suite, "birkhoff", e),
        }
    }
    let radius = Rational::from_ratio(3, 2);
    match (
        EnumeratedVertices::simplex(6, radius.clone()),
        EnumeratedVertices::l1_ball(6, radius.clone()),
    ) {
        (Ok(simplex), Ok(l1)) => {
            let lmo = boxed(ProbabilitySimplex::new(6, radius.clone()), "rational-simplex", corrupt);
            compare_exact(&mut suite, "rational-simplex", lmo.as_ref(), &simplex, &mut rng, 100);
            let lmo = boxed(L1Ball::new(6, radius), "rational-l1-ball", corrupt);
            compare_exact(&mut suite, "rational-l1-ball", lmo.as_ref(), &l1, &mut rng, 100);
        }
        (Err(e), _) | (_, Err(e)) => push_err(&mut suite, "rational", e),
    }
    for k in 0..50 {
        let rows = rng.random_range(1..=20);
        let cols = rng.random_range(1..=20);
        let tau = 2.0;
        let lmo = boxed(NuclearNormBall::new(rows, cols, tau), "nuclear-norm", corrupt);
        let d = random_direction(&mut rng, rows * cols);
        let sigma = singular_values(&d, rows, cols)[0];
        match lmo.compute_extreme_point(&d).and_then(|a| a.inner(&d)) {
            Ok(inner) => {
                let estimate = -inner / tau;
                suite.record((estimate - sigma).abs() <= 1e-6 * sigma.max(1e-300), || {
                    format!("nuclear-norm: matrix {k} ({rows}x{cols}) gives {estimate:e}, SVD {sigma:e}")
                });
            }
            Err(e) => push_err(&mut suite, "nuclear-norm", e),
        }
    }
    suite
}

fn hungarian_suite(seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("hungarian");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let perms = match EnumeratedVertices::<f64>::birkhoff(5) {
        Ok(p) => p,
        Err(e) => {
            suite.record(false, || format!("enumeration: {e}"));
            return suite;
        }
    };
    for k in 0..200 {
        let cost: Vec<f64> = (0..25).map(|_| rng.random_range(0..100) as f64).collect();
        let best = perms
            .vertices()
            .iter()
            .filter_map(|p| p.inner(&cost).ok())
            .fold(f64::INFINITY, f64::min);
        match hungarian(&cost, 5, 5) {
            Ok(a) => {
                let recomputed = Atom::permutation(a.columns.clone()).and_then(|p| p.inner(&cost));
                let ok = a.total_cost == best && recomputed.is_ok_and(|c| c == best);
                suite.record(ok, || {
                    format!("hungarian: matrix {k} cost {} vs enumeration {best}", a.total_cost)
                });
            }
            Err(e) => suite.record(false, || format!("hungarian: matrix {k}: {e}")),
        }
    }
    suite
}

#[derive(Clone, Copy)]
enum Region {
    Simplex,
    L1,
    Birkhoff(usize),
}

impl Region {
    fn name(self) -> &'static str {
        match self {
            Region::Simplex => "simplex",
            Region::L1 => "l1-ball",
            Region::Birkhoff(_) => "birkhoff",
        }
    }

    fn feasible(self, x: &[f64]) -> bool {
        match self {
            Region::Simplex => x.iter().all(|v| *v >= -1e-12) && (x.iter().sum::<f64>() - 1.0).abs() <= 1e-10,
            Region::L1 => x.iter().map(|v| v.abs()).sum::<f64>() <= 1.0 + 1e-10,
            Region::Birkhoff(n) => {
                x.iter().all(|v| *v >= -1e-12)
                    && (0..n).all(|i| {
                        let row: f64 = x[i * n..(i + 1) * n].iter().sum();
                        let col: f64 = (0..n).map(|j| x[j * n + i]).sum();
                        (row - 1.0).abs() <= 1e-10 && (col - 1.0).abs() <= 1e-10
                    })
            }
        }
    }
}

/// Per-row checks shared by every variant; returns the first violation.
fn audit(
    region: Region,
    descent: bool,
    params: &RunParams<f64>,
    run: impl FnOnce(&mut dyn FnMut(&TrajectoryRecord<f64>, &[f64]) -> Control) -> Result<SolverResult<f64>>,
) -> std::result::Result<(), String> {
    let mut violation: Option<String> = None;
    let mut last: Option<TrajectoryRecord<f64>> = None;
    let mut observer = |rec: &TrajectoryRecord<f64>, x: &[f64]| {
        let mut fail = |msg: String| {
            violation.get_or_insert(format!("iteration {}: {msg}", rec.iteration));
        };
        if !region.feasible(x) {
            fail("iterate left the feasible region".into());
        }
        if !(rec.dual_gap >= 0.0) {
            fail(format!("negative gap {}", rec.dual_gap));
        }
        if let Some(prev) = &last {
            if rec.lmo_calls < prev.lmo_calls || rec.cache_hits < prev.cache_hits {
                fail("counters decreased".into());
            }
            if descent && rec.primal > prev.primal {
                fail(format!("primal increased {} -> {}", prev.primal, rec.primal));
            }
        }
        last = Some(rec.clone());
        Control::Continue
    };
    let result = run(&mut observer).map_err(|e| e.to_string())?;
    if let Some(v) = violation {
        return Err(v);
    }
    if result.termination == Termination::GapMet && result.dual_gap > params.epsilon {
        return Err(format!("gap_met with final gap {}", result.dual_gap));
    }
    if let Some(set) = &result.active_set {
        let rebuilt = set.reconstruct();
        if rebuilt.iter().zip(&result.x).any(|(a, b)| (a - b).abs() > 1e-10) {
            return Err("active set does not reconstruct the iterate".into());
        }
    }
    Ok(())
}

fn invariant_suite(seed: u64) -> SuiteResult {
    let mut suite = SuiteResult::new("invariants");
    let params = RunParams {
        max_iterations: 300,
        epsilon: 1e-8,
        ..RunParams::default()
    };
    let regions = [Region::Simplex, Region::L1, Region::Birkhoff(3)];
    for region in regions {
        let (target, lmo, x0): (Vec<f64>, Box<dyn LinearMinimizationOracle<f64>>, Atom<f64>) = match region {
            Region::Simplex => (
                gaussian_point(6, seed),
                Box::new(ProbabilitySimplex::new(6, 1.0)),
                Atom::scaled_unit(6, 0, 1.0).expect("valid index"),
            ),
            Region::L1 => (
                gaussian_point(6, seed + 1),
                Box::new(L1Ball::new(6, 1.0)),
                Atom::scaled_unit(6, 0, 1.0).expect("valid index"),
            ),
            Region::Birkhoff(n) => (
                birkhoff_target(n, seed + 2),
                Box::new(BirkhoffPolytope::new(n)),
                Atom::permutation((0..n).collect()).expect("identity"),
            ),
        };
        for name in ["fw", "lfw", "afw", "lafw", "bcg", "sfw"] {
            let lazy = name == "lafw";
            let p = RunParams {
                lazy,
                step: if name == "sfw" {
                    StepRule::Agnostic
                } else {
                    StepRule::adaptive()
                },
                ..params.clone()
            };
            let descent = name != "sfw";
            let mut f = SquaredDistance::new(target.clone());
            let lmo = lmo.as_ref();
            let x0 = x0.clone();
            let outcome = audit(region, descent, &p, |obs| match name {
                "fw" => frank_wolfe(&mut f, lmo, x0, &p, obs),
                "lfw" => lazified_frank_wolfe(&mut f, lmo, x0, &p, obs),
                "afw" | "lafw" => away_frank_wolfe(&mut f, lmo, x0, &p, obs),
                "bcg" => blended_cg(&mut f, lmo, x0, &p, obs),
                _ => {
                    let mut oracle = ExactGradientOracle { objective: f.clone() };
                    stochastic_fw(&mut oracle, lmo, x0, |_| 1, |_| 1.0, &p, obs)
                }
            });
            suite.record(outcome.is_ok(), || {
                format!(
                    "{name} on {}: {}",
                    region.name(),
                    outcome.clone().err().unwrap_or_default()
                )
            });
        }
    }
    suite
}

fn rational_suite() -> SuiteResult {
    let mut suite = SuiteResult::new("rational");
    suite.exact = true;
    let n = 20;
    let one = Rational::from_i64(1);
    let uniform = Rational::from_ratio(1, n as i64);
    for name in ["fw", "afw"] {
        let params = RunParams {
            max_iterations: 100,
            epsilon: Rational::from_ratio(1, 1_000_000_000),
            step: StepRule::short(Rational::from_i64(2)),
            ..RunParams::default()
        };
        let lmo = ProbabilitySimplex::new(n, one.clone());
        let x0 = Atom::scaled_unit(n, 0, one.clone()).expect("valid index");
        let mut f = SquaredNorm { dim: n };
        let mut sums_exact = true;
        let observer = |_: &TrajectoryRecord<Rational>, x: &[Rational]| {
            sums_exact &= sum(x) == Rational::from_i64(1);
            Control::Continue
        };
        let result = match name {
            "fw" => frank_wolfe(&mut f, &lmo, x0, &params, observer),
            _ => away_frank_wolfe(&mut f, &lmo, x0, &params, observer),
        };
        let r = match result {
            Ok(r) => r,
            Err(e) => {
                suite.record(false, || format!("{name}: {e}"));
                continue;
            }
        };
        suite.record(sums_exact, || {
            format!("{name}: an iterate's coordinates did not sum to exactly 1")
        });
        for (i, c) in r.x.iter().enumerate() {
            suite.record(*c == uniform, || {
                format!("{name}: coordinate {i} is {c}, expected {uniform}")
            });
        }
        suite.record(r.dual_gap == Rational::from_i64(0), || {
            format!("{name}: final gap {}", r.dual_gap)
        });
        suite.record(r.primal == uniform, || {
            format!("{name}: primal {} expected {uniform}", r.primal)
        });
        let mut grad = vec![Rational::from_i64(0); n];
        f.gradient(&r.x, &mut grad);
        suite.record(dot(&grad, &r.x) == Rational::from_ratio(2, n as i64), || {
            format!("{name}: <grad, x> is not 2/{n}")
        });
        if let Some(set) = &r.active_set {
            suite.record(set.weight_sum() == one, || {
                format!("{name}: weights sum to {}", set.weight_sum())
            });
        }
    }
    suite
}
