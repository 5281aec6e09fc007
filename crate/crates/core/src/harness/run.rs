use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use super::config::{Preset, RunConfig, StepChoice, Variant};
use super::instance::{EntrySampler, Instance};
use super::pgd::{numerical_rank, project_l1_ball, project_nuclear_ball, projected_gradient};
use super::HarnessError;
use crate::atoms::Atom;
use crate::error::{Error, Result};
use crate::lmo::{BirkhoffPolytope, L1Ball, LinearMinimizationOracle, NuclearNormBall, ProbabilitySimplex};
use crate::problems::{
    ExactGradientOracle, Objective, SquaredDistance, SquaredNorm, StochasticLinearOracle, StochasticOracle,
};
use crate::scalar::{sum, Rational, Scalar};
use crate::solvers::{
    away_frank_wolfe, blended_cg, frank_wolfe, lazified_frank_wolfe, stochastic_fw, Control, RunParams, SolverResult,
    StepKind, TrajectoryRecord,
};
use crate::steps::StepRule;

pub const CSV_HEADER: &str =
    "variant,iteration,elapsed_seconds,primal,dual_gap,lmo_calls,cache_hits,active_set_size,step_kind";

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub iteration: usize,
    pub elapsed_seconds: f64,
    pub primal: f64,
    pub dual_gap: f64,
    pub lmo_calls: u64,
    pub cache_hits: u64,
    pub active_set_size: usize,
    pub step_kind: StepKind,
    pub test_error: Option<f64>,
}

/// Exact values of a rational run, as `numer/denom` strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactSummary {
    pub primal: String,
    pub dual_gap: String,
    pub coordinate_sum: String,
    pub solution: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub variant: Variant,
    pub termination: String,
    pub iterations: usize,
    pub primal: f64,
    pub dual_gap: f64,
    pub lmo_calls: u64,
    pub cache_hits: u64,
    /// Active-set size for decomposition-tracking variants; nonzero count
    /// or numerical rank otherwise.
    pub sparsity: usize,
    pub wall_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactSummary>,
}

#[derive(Debug, Clone)]
pub struct VariantReport {
    pub summary: VariantSummary,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: RunConfig,
    pub instance: serde_json::Value,
    pub variants: Vec<VariantReport>,
}

impl RunReport {
    pub fn variant(&self, v: Variant) -> Option<&VariantReport> {
        self.variants.iter().find(|r| r.summary.variant == v)
    }

    pub fn to_csv(&self) -> String {
        let with_test = self.config.preset.has_test_error();
        let mut out = String::from(CSV_HEADER);
        if with_test {
            out.push_str(",test_error");
        }
        out.push('\n');
        for report in &self.variants {
            let name = report.summary.variant.as_str();
            for r in &report.rows {
                let _ = write!(
                    out,
                    "{name},{},{:.6},{},{},{},{},{},{}",
                    r.iteration,
                    r.elapsed_seconds,
                    r.primal,
                    r.dual_gap,
                    r.lmo_calls,
                    r.cache_hits,
                    r.active_set_size,
                    r.step_kind.as_str()
                );
                if with_test {
                    match r.test_error {
                        Some(e) => {
                            let _ = write!(out, ",{e}");
                        }
                        None => out.push(','),
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let variants: Vec<_> = self.variants.iter().map(|r| &r.summary).collect();
        json!({
            "schema_version": 1,
            "preset": self.config.preset,
            "seed": self.config.seed,
            "max_iterations": self.config.resolved_max_iterations(),
            "epsilon": self.config.epsilon,
            "config": self.config,
            "instance": self.instance,
            "variants": variants,
        })
    }

    /// Fixed-width comparison table, one line per variant in config order.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<14} {:>16} {:>11} {:>9} {:>10} {:>9} {:>9}  {}\n",
            "variant", "primal", "dual_gap", "lmo_calls", "cache_hits", "wall_s", "sparsity", "termination"
        );
        for r in &self.variants {
            let s = &r.summary;
            let _ = writeln!(
                out,
                "{:<14} {:>16.9e} {:>11.3e} {:>9} {:>10} {:>9.3} {:>9}  {}",
                s.variant.as_str(),
                s.primal,
                s.dual_gap,
                s.lmo_calls,
                s.cache_hits,
                s.wall_seconds,
                s.sparsity,
                s.termination
            );
        }
        out
    }

    /// Writes the CSV and, next to it, the JSON summary.
    pub fn write(&self, csv_path: &std::path::Path, summary_path: &std::path::Path) -> Result<(), HarnessError> {
        for path in [csv_path, summary_path] {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(csv_path, self.to_csv())?;
        let text = serde_json::to_string_pretty(&self.summary_json()).map_err(Error::from)?;
        std::fs::write(summary_path, text + "\n")?;
        Ok(())
    }
}

/// Runs every configured variant on the preset instance without writing
/// files.
pub fn execute(cfg: &RunConfig) -> Result<RunReport, HarnessError> {
    cfg.validate()?;
    let instance = Instance::build(cfg)?;
    let variants = cfg.resolved_variants();
    let results: Vec<Result<VariantReport>> = if cfg.parallel && variants.len() > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = variants
                .iter()
                .map(|&v| {
                    let instance = &instance;
                    scope.spawn(move || run_variant(cfg, instance, v))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .unwrap_or_else(|_| Err(Error::Unsupported("solver thread panicked".into())))
                })
                .collect()
        })
    } else {
        variants.iter().map(|&v| run_variant(cfg, &instance, v)).collect()
    };
    let variants = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RunReport {
        config: cfg.clone(),
        instance: instance.describe(),
        variants,
    })
}

/// `execute`, then write the CSV (default `<preset>.csv`) and JSON summary.
pub fn run(cfg: &RunConfig) -> Result<(RunReport, PathBuf, PathBuf), HarnessError> {
    let report = execute(cfg)?;
    let csv = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.preset.as_str())));
    let summary = cfg.summary.clone().unwrap_or_else(|| csv.with_extension("json"));
    report.write(&csv, &summary)?;
    Ok((report, csv, summary))
}

/// `execute`, write files only when an output path is configured, and
/// return the comparison table.
pub fn compare(cfg: &RunConfig) -> Result<(RunReport, String), HarnessError> {
    let report = execute(cfg)?;
    if let (Some(csv), Some(summary)) = (cfg.output.as_ref(), cfg.summary_path()) {
        report.write(csv, &summary)?;
    }
    let table = report.table();
    Ok((report, table))
}

fn solver_params<S: Scalar>(
    cfg: &RunConfig,
    instance: &Instance,
    variant: Variant,
    convert: impl Fn(f64) -> S,
) -> Result<RunParams<S>> {
    let default_step = match (cfg.preset, variant) {
        (_, Variant::Sfw) => StepChoice::Agnostic,
        (Preset::Rational, _) => StepChoice::Short,
        _ => StepChoice::Adaptive,
    };
    let step = match cfg.step.unwrap_or(default_step) {
        StepChoice::Adaptive => StepRule::adaptive(),
        StepChoice::Agnostic => StepRule::Agnostic,
        StepChoice::LineSearch => StepRule::line_search(),
        StepChoice::Short => {
            let l = match cfg.lipschitz {
                Some(l) => l,
                None => instance.lipschitz()?,
            };
            StepRule::short(convert(l))
        }
    };
    Ok(RunParams {
        max_iterations: cfg.resolved_max_iterations(),
        epsilon: convert(cfg.epsilon),
        step,
        lazy: variant == Variant::Lafw,
        cache_capacity: cfg.cache_capacity,
        k_lazy: convert(cfg.k_lazy),
        verbosity: cfg.verbosity,
        seed: cfg.seed,
        track_active_set: variant.tracks_active_set(),
        gap_check_interval: cfg.gap_check_interval,
    })
}

fn exact(value: f64) -> Rational {
    BigRational::from_float(value).unwrap_or_default()
}

/// Dispatches one of the decomposition-based variants.
fn solve<S, F, L>(
    variant: Variant,
    f: &mut F,
    lmo: &L,
    x0: Atom<S>,
    params: &RunParams<S>,
    mut eval: impl FnMut(&[S]) -> Option<f64>,
) -> Result<(SolverResult<S>, Vec<Option<f64>>)>
where
    S: Scalar,
    F: Objective<S> + ?Sized,
    L: LinearMinimizationOracle<S> + ?Sized,
{
    let mut tests = Vec::new();
    let observer = |_: &TrajectoryRecord<S>, x: &[S]| {
        tests.push(eval(x));
        Control::Continue
    };
    let result = match variant {
        Variant::Fw => frank_wolfe(f, lmo, x0, params, observer),
        Variant::Lfw => lazified_frank_wolfe(f, lmo, x0, params, observer),
        Variant::Afw | Variant::Lafw => away_frank_wolfe(f, lmo, x0, params, observer),
        Variant::Bcg => blended_cg(f, lmo, x0, params, observer),
        Variant::Sfw | Variant::PgdReference => {
            return Err(Error::Unsupported(format!(
                "{variant} is not a decomposition-based variant"
            )))
        }
    }?;
    Ok((result, tests))
}

fn sfw<Q, L>(
    oracle: &mut Q,
    lmo: &L,
    x0: Atom<f64>,
    cfg: &RunConfig,
    params: &RunParams<f64>,
    mut eval: impl FnMut(&[f64]) -> Option<f64>,
) -> Result<(SolverResult<f64>, Vec<Option<f64>>)>
where
    Q: StochasticOracle + ?Sized,
    L: LinearMinimizationOracle<f64> + ?Sized,
{
    let mut tests = Vec::new();
    let observer = |_: &TrajectoryRecord<f64>, x: &[f64]| {
        tests.push(eval(x));
        Control::Continue
    };
    let batch = cfg.batch;
    let rho = cfg.momentum;
    let result = stochastic_fw(oracle, lmo, x0, |t| batch.size(t), |_| rho, params, observer)?;
    Ok((result, tests))
}

fn rows<S: Scalar>(trajectory: &[TrajectoryRecord<S>], tests: &[Option<f64>]) -> Vec<Row> {
    trajectory
        .iter()
        .enumerate()
        .map(|(i, r)| Row {
            iteration: r.iteration,
            elapsed_seconds: r.elapsed_seconds,
            primal: r.primal.to_f64(),
            dual_gap: r.dual_gap.to_f64(),
            lmo_calls: r.lmo_calls,
            cache_hits: r.cache_hits,
            active_set_size: r.active_set_size,
            step_kind: r.step_kind,
            test_error: tests.get(i).copied().flatten(),
        })
        .collect()
}

fn report<S: Scalar>(
    variant: Variant,
    result: &SolverResult<S>,
    tests: &[Option<f64>],
    wall_seconds: f64,
    sparsity_fallback: impl FnOnce(&[S]) -> usize,
) -> VariantReport {
    let sparsity = match &result.active_set {
        Some(set) => set.len(),
        None => sparsity_fallback(&result.x),
    };
    VariantReport {
        summary: VariantSummary {
            variant,
            termination: result.termination.as_str().to_string(),
            iterations: result.iterations,
            primal: result.primal.to_f64(),
            dual_gap: result.dual_gap.to_f64(),
            lmo_calls: result.lmo_calls,
            cache_hits: result.cache_hits,
            sparsity,
            wall_seconds,
            test_error: tests.last().copied().flatten(),
            exact: None,
        },
        rows: rows(&result.trajectory, tests),
    }
}

fn nonzeros(x: &[f64]) -> usize {
    x.iter().filter(|v| **v != 0.0).count()
}

fn run_variant(cfg: &RunConfig, instance: &Instance, variant: Variant) -> Result<VariantReport> {
    let clock = Instant::now();
    match instance {
        Instance::Polyreg(inst) => {
            let params = solver_params(cfg, instance, variant, |v| v)?;
            let radius = inst.l1_radius();
            let lmo = L1Ball::new(inst.train.features().cols, radius);
            let mut f = inst.train.clone();
            let mut test = inst.test.clone();
            let mut grad = vec![0.0; f.dim()];
            f.gradient(&vec![0.0; grad.len()], &mut grad);
            let x0 = lmo.compute_extreme_point(&grad)?;
            let eval = |x: &[f64]| Some(test.mean_squared_error(x));
            let (result, tests) = match variant {
                Variant::Sfw => {
                    let features = inst.train.features().clone();
                    let mut oracle = StochasticLinearOracle::new(features, inst.train.targets().to_vec(), cfg.seed)?;
                    sfw(&mut oracle, &lmo, x0, cfg, &params, eval)?
                }
                Variant::PgdReference => {
                    let mut tests = Vec::new();
                    let mut eval = eval;
                    let observer = |_: &TrajectoryRecord<f64>, x: &[f64]| {
                        tests.push(eval(x));
                        Control::Continue
                    };
                    let project = |y: &[f64]| Ok(project_l1_ball(y, radius));
                    let r = projected_gradient(&mut f, project, &lmo, x0.materialize(), &params, observer)?;
                    (r, tests)
                }
                _ => solve(variant, &mut f, &lmo, x0, &params, eval)?,
            };
            Ok(report(
                variant,
                &result,
                &tests,
                clock.elapsed().as_secs_f64(),
                nonzeros,
            ))
        }
        Instance::Matcomp(inst) => {
            let params = solver_params(cfg, instance, variant, |v| v)?;
            let (rows, cols) = (inst.train.rows, inst.train.cols);
            let radius = inst.radius_hint();
            let lmo = NuclearNormBall::new(rows, cols, radius);
            let mut f = inst.train.clone();
            let mut grad = vec![0.0; rows * cols];
            f.gradient(&vec![0.0; grad.len()], &mut grad);
            let x0 = lmo.compute_extreme_point(&grad)?;
            let test = &inst.test;
            let eval = |x: &[f64]| Some(test.rmse(x));
            let (result, tests) = match variant {
                Variant::Sfw => {
                    let mut oracle = EntrySampler::new(inst.train.clone(), cfg.seed)?;
                    sfw(&mut oracle, &lmo, x0, cfg, &params, eval)?
                }
                Variant::PgdReference => {
                    let mut tests = Vec::new();
                    let observer = |_: &TrajectoryRecord<f64>, x: &[f64]| {
                        tests.push(eval(x));
                        Control::Continue
                    };
                    let project = |y: &[f64]| project_nuclear_ball(y, rows, cols, radius);
                    let r = projected_gradient(&mut f, project, &lmo, x0.materialize(), &params, observer)?;
                    (r, tests)
                }
                _ => solve(variant, &mut f, &lmo, x0, &params, eval)?,
            };
            let rank = |x: &[f64]| numerical_rank(x, rows, cols, 1e-9);
            Ok(report(variant, &result, &tests, clock.elapsed().as_secs_f64(), rank))
        }
        Instance::Birkhoff { n, target } => {
            let params = solver_params(cfg, instance, variant, |v| v)?;
            let lmo = BirkhoffPolytope::new(*n);
            let x0 = Atom::permutation((0..*n).collect())?;
            let mut f = SquaredDistance::new(target.clone());
            let (result, tests) = match variant {
                Variant::Sfw => {
                    let mut oracle = ExactGradientOracle { objective: f };
                    sfw(&mut oracle, &lmo, x0, cfg, &params, |_| None)?
                }
                _ => solve(variant, &mut f, &lmo, x0, &params, |_| None)?,
            };
            Ok(report(
                variant,
                &result,
                &tests,
                clock.elapsed().as_secs_f64(),
                nonzeros,
            ))
        }
        Instance::SimplexProjection { target, .. } => {
            let params = solver_params(cfg, instance, variant, |v| v)?;
            let n = target.len();
            let lmo = ProbabilitySimplex::new(n, 1.0);
            let x0 = Atom::scaled_unit(n, 0, 1.0)?;
            let mut f = SquaredDistance::new(target.clone());
            let (result, tests) = match variant {
                Variant::Sfw => {
                    let mut oracle = ExactGradientOracle { objective: f };
                    sfw(&mut oracle, &lmo, x0, cfg, &params, |_| None)?
                }
                _ => solve(variant, &mut f, &lmo, x0, &params, |_| None)?,
            };
            Ok(report(
                variant,
                &result,
                &tests,
                clock.elapsed().as_secs_f64(),
                nonzeros,
            ))
        }
        Instance::Rational { n } => {
            let params = solver_params(cfg, instance, variant, exact)?;
            let n = *n;
            let one = Rational::from_i64(1);
            let lmo = ProbabilitySimplex::new(n, one.clone());
            let x0 = Atom::scaled_unit(n, 0, one)?;
            let mut f = SquaredNorm { dim: n };
            let (result, tests) = solve(variant, &mut f, &lmo, x0, &params, |_| None)?;
            let zero = Rational::from_i64(0);
            let mut rep = report(
                variant,
                &result,
                &tests,
                clock.elapsed().as_secs_f64(),
                |x: &[Rational]| x.iter().filter(|v| **v != zero).count(),
            );
            rep.summary.exact = Some(ExactSummary {
                primal: result.primal.to_string(),
                dual_gap: result.dual_gap.to_string(),
                coordinate_sum: sum(&result.x).to_string(),
                solution: result.x.iter().map(|c| c.to_string()).collect(),
            });
            Ok(rep)
        }
    }
}
