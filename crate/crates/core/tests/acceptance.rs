//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Reference values come from brute-force enumeration, dense SVD
//! and closed-form optimality conditions computed here.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use cgkit::harness::{self, Preset, RunConfig, StepChoice, Variant};
use cgkit::lmo::{
    BirkhoffPolytope, EnumeratedVertices, KSparsePolytope, L1Ball, LInfBall, LinearMinimizationOracle, NuclearNormBall,
    ProbabilitySimplex,
};
use cgkit::problems::{
    finite_diff_check, generate_sparse_regression, matrix_completion_instance, LinearObjective, MatrixCompletionParams,
    Objective, SparseRegressionParams, SquaredDistance, SquaredNorm, StochasticLinearOracle, WeightedSquaredDistance,
};
use cgkit::solvers::{
    away_frank_wolfe, blended_cg, frank_wolfe, lazified_frank_wolfe, Control, RunParams, SolverResult, StepKind,
    TrajectoryRecord,
};
use cgkit::steps::StepRule;
use cgkit::{Atom, Rational, Scalar};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dense_dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x.clone() * y.clone();
    }
    acc
}

// ---------------------------------------------------------------- vertices

fn simplex_vertices<S: Scalar>(n: usize, tau: &S) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { tau.clone() } else { S::zero() }).collect())
        .collect()
}

fn l1_vertices<S: Scalar>(n: usize, tau: &S) -> Vec<Vec<S>> {
    let mut out = simplex_vertices(n, tau);
    out.extend(simplex_vertices(n, &-tau.clone()));
    out
}

fn sign_vectors<S: Scalar>(n: usize, tau: &S) -> Vec<Vec<S>> {
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { -tau.clone() } else { tau.clone() })
                .collect()
        })
        .collect()
}

fn ksparse_vertices<S: Scalar>(n: usize, k: usize, tau: &S) -> Vec<Vec<S>> {
    let mut out = Vec::new();
    for support in 0..1usize << n {
        if support.count_ones() as usize != k {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| support >> i & 1 == 1).collect();
        for signs in 0..1usize << k {
            let mut v = vec![S::zero(); n];
            for (b, &i) in idx.iter().enumerate() {
                v[i] = if signs >> b & 1 == 1 { -tau.clone() } else { tau.clone() };
            }
            out.push(v);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm.
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn permutation_matrices(n: usize) -> Vec<Vec<f64>> {
    permutations(n)
        .into_iter()
        .map(|p| {
            let mut m = vec![0.0; n * n];
            for (i, j) in p.into_iter().enumerate() {
                m[i * n + j] = 1.0;
            }
            m
        })
        .collect()
}

fn brute_min<S: Scalar>(vertices: &[Vec<S>], d: &[S]) -> S {
    vertices
        .iter()
        .map(|v| dense_dot(v, d))
        .reduce(|a, b| if b < a { b } else { a })
        .expect("non-empty vertex list")
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    let check_float = |name: &str,
                       lmo: &dyn LinearMinimizationOracle<f64>,
                       vertices: &[Vec<f64>],
                       rng: &mut ChaCha8Rng,
                       checked: &mut usize|
     -> Result<(), String> {
        for k in 0..100 {
            let d: Vec<f64> = (0..lmo.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let atom = lmo.compute_extreme_point(&d).map_err(|e| e.to_string())?;
            let value = dense_dot(&atom.materialize(), &d);
            let best = brute_min(vertices, &d);
            ensure(rel_close(value, best, 1e-12), || {
                format!("{name} direction {k}: {value} vs {best}")
            })?;
            *checked += 1;
        }
        Ok(())
    };
    for n in [1, 2, 5, 8] {
        check_float(
            "simplex",
            &ProbabilitySimplex::new(n, 1.5),
            &simplex_vertices(n, &1.5),
            &mut rng,
            &mut checked,
        )?;
        check_float(
            "l1",
            &L1Ball::new(n, 2.0),
            &l1_vertices(n, &2.0),
            &mut rng,
            &mut checked,
        )?;
        check_float(
            "linf",
            &LInfBall::new(n, 0.5),
            &sign_vectors(n, &0.5),
            &mut rng,
            &mut checked,
        )?;
    }
    for (n, k) in [(5, 2), (8, 3), (6, 6)] {
        let lmo = KSparsePolytope::new(n, k, 1.25).map_err(|e| e.to_string())?;
        check_float("k-sparse", &lmo, &ksparse_vertices(n, k, &1.25), &mut rng, &mut checked)?;
    }
    for n in 1..=5 {
        check_float(
            "birkhoff",
            &BirkhoffPolytope::new(n),
            &permutation_matrices(n),
            &mut rng,
            &mut checked,
        )?;
    }

    let random_q = |rng: &mut ChaCha8Rng, n: usize| -> Vec<Rational> {
        (0..n)
            .map(|_| Rational::from_ratio(rng.random_range(-40..=40), rng.random_range(1..=9)))
            .collect()
    };
    let tau = Rational::from_ratio(7, 3);
    for n in [2, 5, 8] {
        let regions: Vec<(&str, Box<dyn LinearMinimizationOracle<Rational>>, Vec<Vec<Rational>>)> = vec![
            (
                "q-simplex",
                Box::new(ProbabilitySimplex::new(n, tau.clone())),
                simplex_vertices(n, &tau),
            ),
            ("q-l1", Box::new(L1Ball::new(n, tau.clone())), l1_vertices(n, &tau)),
            ("q-linf", Box::new(LInfBall::new(n, tau.clone())), sign_vectors(n, &tau)),
            (
                "q-k-sparse",
                Box::new(KSparsePolytope::new(n, 2, tau.clone()).map_err(|e| e.to_string())?),
                ksparse_vertices(n, 2, &tau),
            ),
        ];
        for (name, lmo, vertices) in regions {
            for k in 0..100 {
                let d = random_q(&mut rng, n);
                let atom = lmo.compute_extreme_point(&d).map_err(|e| e.to_string())?;
                let value = dense_dot(&atom.materialize(), &d);
                let best = brute_min(&vertices, &d);
                ensure(value == best, || {
                    format!("{name} n={n} direction {k}: {value} vs {best}")
                })?;
                checked += 1;
            }
        }
    }
    let q_birkhoff = BirkhoffPolytope::new(4);
    let q_perms: Vec<Vec<Rational>> = permutation_matrices(4)
        .into_iter()
        .map(|m| m.into_iter().map(|v| Rational::from_i64(v as i64)).collect())
        .collect();
    for k in 0..100 {
        let d = random_q(&mut rng, 16);
        let atom = q_birkhoff.compute_extreme_point(&d).map_err(|e| e.to_string())?;
        let value = dense_dot(&atom.materialize(), &d);
        let best = brute_min(&q_perms, &d);
        ensure(value == best, || format!("q-birkhoff direction {k}: {value} vs {best}"))?;
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("{checked} directions matched enumeration in {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let perms = permutations(5);
    ensure(perms.len() == 120, || "enumeration size".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..200 {
        let cost: Vec<f64> = (0..25).map(|_| rng.random_range(-1000.0..1000.0)).collect();
        let best = perms
            .iter()
            .map(|p| p.iter().enumerate().map(|(i, &j)| cost[i * 5 + j]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let a = cgkit::lmo::hungarian(&cost, 5, 5).map_err(|e| e.to_string())?;
        let cost_of_answer: f64 = a.columns.iter().enumerate().map(|(i, &j)| cost[i * 5 + j]).sum();
        ensure(rel_close(cost_of_answer, best, 1e-12), || {
            format!("matrix {k}: assignment {cost_of_answer} vs enumeration {best}")
        })?;
        ensure(rel_close(a.total_cost, best, 1e-12), || {
            format!("matrix {k}: reported {} vs enumeration {best}", a.total_cost)
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!("200 matrices optimal in {secs:.2} s"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let rows = rng.random_range(1..=20);
        let cols = rng.random_range(1..=20);
        let tau = rng.random_range(0.5..5.0);
        let d: Vec<f64> = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sigma = DMatrix::from_row_slice(rows, cols, &d)
            .singular_values()
            .iter()
            .copied()
            .fold(0.0, f64::max);
        let atom = NuclearNormBall::new(rows, cols, tau)
            .compute_extreme_point(&d)
            .map_err(|e| e.to_string())?;
        let estimate = -dense_dot(&atom.materialize(), &d) / tau;
        let rel = (estimate - sigma).abs() / sigma;
        worst = worst.max(rel);
        ensure(rel <= 1e-6, || {
            format!("matrix {k} ({rows}x{cols}): {estimate} vs {sigma}")
        })?;
    }
    Ok(format!("50 matrices, worst relative error {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let n = 50;
    let u = vec![1.0 / n as f64; n];
    let params = RunParams {
        max_iterations: 1000,
        epsilon: f64::MIN_POSITIVE,
        step: StepRule::Agnostic,
        ..RunParams::default()
    };
    let r = frank_wolfe(
        &mut SquaredDistance::new(u),
        &ProbabilitySimplex::new(n, 1.0),
        Atom::scaled_unit(n, 0, 1.0).map_err(|e| e.to_string())?,
        &params,
        (),
    )
    .map_err(|e| e.to_string())?;
    let (l, d2) = (2.0, 2.0);
    let mut tightest: f64 = 0.0;
    for rec in &r.trajectory {
        let bound = 2.0 * l * d2 / (rec.iteration as f64 + 2.0);
        ensure(rec.primal <= bound, || {
            format!("t={}: gap {} > bound {bound}", rec.iteration, rec.primal)
        })?;
        tightest = tightest.max(rec.primal / bound);
    }
    ensure(r.trajectory.len() == 1001, || format!("{} rows", r.trajectory.len()))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.2} s"))?;
    Ok(format!("1001 rows under 8/(t+2), max ratio {tightest:.3}, {secs:.3} s"))
}

/// Weighted quadratic over the simplex whose minimizer `p` lies on the face
/// spanned by the first four vertices; the target is built from the KKT
/// conditions with multiplier `lambda` and strict complementarity.
fn face_instance() -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let weights = vec![1.0, 3.0, 7.0, 2.0, 10.0, 5.0, 4.0, 8.0];
    let p = vec![0.4, 0.25, 0.2, 0.15, 0.0, 0.0, 0.0, 0.0];
    let lambda = -0.2;
    let target = (0..8)
        .map(|i| {
            if p[i] > 0.0 {
                p[i] - lambda / (2.0 * weights[i])
            } else {
                -lambda / (2.0 * weights[i]) - 0.2
            }
        })
        .collect();
    (weights, target, p)
}

fn criterion_5() -> Outcome {
    let (weights, target, p) = face_instance();
    // KKT check: gradient equals lambda on the support and exceeds it off it.
    let grad: Vec<f64> = (0..8).map(|i| 2.0 * weights[i] * (p[i] - target[i])).collect();
    for i in 0..8 {
        if p[i] > 0.0 {
            ensure((grad[i] + 0.2).abs() < 1e-12, || format!("KKT equality fails at {i}"))?;
        } else {
            ensure(grad[i] > -0.2 + 1e-3, || format!("KKT inequality fails at {i}"))?;
        }
    }
    let f_star = (0..8).map(|i| weights[i] * (p[i] - target[i]).powi(2)).sum::<f64>();
    let objective = WeightedSquaredDistance { weights, target };
    let params = RunParams {
        max_iterations: 500,
        epsilon: 1e-15,
        step: StepRule::line_search(),
        ..RunParams::default()
    };
    let lmo = ProbabilitySimplex::new(8, 1.0);
    let x0 = Atom::scaled_unit(8, 7, 1.0).map_err(|e| e.to_string())?;
    let fw = frank_wolfe(&mut objective.clone(), &lmo, x0.clone(), &params, ()).map_err(|e| e.to_string())?;
    let afw = away_frank_wolfe(&mut objective.clone(), &lmo, x0, &params, ()).map_err(|e| e.to_string())?;
    let gaps = |r: &SolverResult<f64>| -> Vec<f64> { r.trajectory.iter().map(|x| x.primal - f_star).collect() };
    let (g_fw, g_afw) = (gaps(&fw), gaps(&afw));
    let reach = g_afw.iter().position(|g| *g <= 1e-10);
    ensure(reach.is_some_and(|t| t <= 500), || {
        "AFW never reached primal gap 1e-10".into()
    })?;
    // AFW's gap at iteration 500 is its final gap when it stopped earlier.
    let afw_500 = g_afw.get(500).or(g_afw.last()).copied().unwrap_or(f64::NAN).max(1e-15);
    let fw_500 = g_fw[500.min(g_fw.len() - 1)];
    ensure(fw.trajectory.len() == 501, || {
        format!("FW stopped at {}", fw.iterations)
    })?;
    ensure(fw_500 >= 1e3 * afw_500, || {
        format!("FW gap {fw_500:e} vs AFW {afw_500:e}")
    })?;
    let pts: Vec<(f64, f64)> = g_afw
        .iter()
        .enumerate()
        .filter(|(t, g)| (10..=100).contains(t) && **g > 1e-14)
        .map(|(t, g)| (t as f64, g.ln()))
        .collect();
    ensure(pts.len() >= 3, || format!("only {} fit points", pts.len()))?;
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / pts.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    let ratio = slope.exp();
    ensure(ratio < 1.0, || format!("fitted ratio {ratio}"))?;
    Ok(format!(
        "AFW gap <= 1e-10 at t={}, FW gap at 500 = {fw_500:.2e}, fitted ratio {ratio:.3} over {} points",
        reach.unwrap_or(0),
        pts.len()
    ))
}

fn assert_exact_scalar<S: Scalar>() -> bool {
    S::EXACT
}

fn criterion_6() -> Outcome {
    ensure(assert_exact_scalar::<Rational>(), || "Rational is not exact".into())?;
    let n = 100;
    let one = Rational::from_i64(1);
    let params = RunParams {
        max_iterations: 1000,
        epsilon: Rational::from_ratio(1, 10_000_000),
        step: StepRule::short(Rational::from_i64(2)),
        ..RunParams::default()
    };
    let mut bad_sum = None;
    let observer = |rec: &TrajectoryRecord<Rational>, x: &[Rational]| {
        let mut s = Rational::from_i64(0);
        for c in x {
            s += c.clone();
        }
        if s != Rational::from_i64(1) && bad_sum.is_none() {
            bad_sum = Some(rec.iteration);
        }
        Control::Continue
    };
    let x0 = Atom::scaled_unit(n, 0, one.clone()).map_err(|e| e.to_string())?;
    let r = frank_wolfe(
        &mut SquaredNorm { dim: n },
        &ProbabilitySimplex::new(n, one.clone()),
        x0,
        &params,
        observer,
    )
    .map_err(|e| e.to_string())?;
    ensure(bad_sum.is_none(), || {
        format!("coordinates do not sum to 1 at iteration {bad_sum:?}")
    })?;
    let uniform = Rational::from_ratio(1, 100);
    ensure(r.x.iter().all(|c| *c == uniform), || {
        "final iterate is not the uniform point".into()
    })?;
    let set = r.active_set.as_ref().ok_or("missing active set")?;
    let mut w = Rational::from_i64(0);
    for c in set.weights() {
        w += c.clone();
    }
    ensure(w == one, || format!("weights sum to {w}"))?;
    ensure(r.dual_gap == Rational::from_i64(0), || {
        format!("solver gap {}", r.dual_gap)
    })?;
    // Independent gap at the uniform point: grad = 2x, min over vertices.
    let grad: Vec<Rational> = r.x.iter().map(|c| Rational::from_i64(2) * c.clone()).collect();
    let min_vertex = grad
        .iter()
        .cloned()
        .reduce(|a, b| if b < a { b } else { a })
        .unwrap_or_default();
    let gap = dense_dot(&grad, &r.x) - min_vertex;
    ensure(gap == Rational::from_i64(0), || format!("independent gap {gap}"))?;
    let cfg = RunConfig::new(Preset::Rational);
    let report = harness::execute(&cfg).map_err(|e| e.to_string())?;
    let exact = report.variants[0]
        .summary
        .exact
        .clone()
        .ok_or("summary lacks exact values")?;
    ensure(
        exact.solution.len() == 100 && exact.solution.iter().all(|c| c == "1/100"),
        || "summary solution is not 1/100 everywhere".into(),
    )?;
    ensure(exact.dual_gap == "0", || format!("summary gap {}", exact.dual_gap))?;
    Ok(format!(
        "uniform point 1/100 after {} iterations, gap exactly 0",
        r.iterations
    ))
}

fn criterion_7() -> Outcome {
    let base = RunConfig {
        epsilon: 1e-7,
        ..RunConfig::new(Preset::Birkhoff)
    };
    let bounded = RunConfig {
        variants: vec![Variant::Fw, Variant::Lfw, Variant::Lafw, Variant::Bcg],
        cache_capacity: Some(500),
        ..base.clone()
    };
    let unbounded = RunConfig {
        variants: vec![Variant::Lfw],
        cache_capacity: None,
        ..base
    };
    let a = harness::execute(&bounded).map_err(|e| e.to_string())?;
    let b = harness::execute(&unbounded).map_err(|e| e.to_string())?;
    let fw = a.variant(Variant::Fw).ok_or("missing fw")?;
    ensure(fw.rows.len() > 1, || "fw made no iterations".into())?;
    let fw_iterations = fw.summary.iterations as u64;
    let mut parts = vec![format!("FW {fw_iterations} iterations")];
    for (label, report) in [
        ("L-CG", b.variant(Variant::Lfw)),
        ("BL-CG", a.variant(Variant::Lfw)),
        ("L-AFW", a.variant(Variant::Lafw)),
        ("BCG", a.variant(Variant::Bcg)),
    ] {
        let s = &report.ok_or("missing variant")?.summary;
        ensure(s.lmo_calls < fw_iterations, || {
            format!("{label}: {} calls", s.lmo_calls)
        })?;
        ensure(s.cache_hits > 0, || format!("{label}: no cache hits"))?;
        parts.push(format!("{label} {} calls/{} hits", s.lmo_calls, s.cache_hits));
    }
    Ok(parts.join(", "))
}

fn median(mut v: Vec<usize>) -> usize {
    v.sort_unstable();
    v[v.len() / 2]
}

fn criterion_8() -> Outcome {
    let cfg = RunConfig {
        variants: vec![Variant::Fw],
        max_iterations: Some(100),
        ..RunConfig::new(Preset::Matcomp)
    };
    let report = harness::execute(&cfg).map_err(|e| e.to_string())?;
    let fw = &report.variants[0];
    let first = fw.rows.first().ok_or("no rows")?;
    ensure(first.active_set_size == 1, || "start is not rank one".into())?;
    ensure(fw.summary.sparsity <= 101, || {
        format!("{} rank-one terms", fw.summary.sparsity)
    })?;
    let terms = fw.summary.sparsity;

    let mut sizes = [Vec::new(), Vec::new(), Vec::new()];
    for seed in 0..5 {
        let cfg = RunConfig {
            variants: vec![Variant::Bcg, Variant::Lafw, Variant::Afw],
            seed,
            ..RunConfig::new(Preset::Birkhoff)
        };
        let report = harness::execute(&cfg).map_err(|e| e.to_string())?;
        for (slot, v) in report.variants.iter().enumerate() {
            sizes[slot].push(v.summary.sparsity);
        }
    }
    let [bcg, lafw, afw] = sizes.map(median);
    ensure(bcg <= lafw && lafw <= afw, || {
        format!("medians bcg {bcg}, lafw {lafw}, afw {afw}")
    })?;
    Ok(format!(
        "matcomp FW {terms} terms after 100 iterations; Birkhoff medians bcg {bcg} <= lafw {lafw} <= afw {afw}"
    ))
}

fn criterion_9() -> Outcome {
    let variants = vec![Variant::Fw, Variant::Lfw, Variant::Afw, Variant::Lafw, Variant::Bcg];
    let configs = [
        RunConfig {
            max_iterations: Some(100),
            ..RunConfig::new(Preset::Polyreg)
        },
        RunConfig::new(Preset::Matcomp),
        RunConfig::new(Preset::Birkhoff),
        RunConfig::new(Preset::SimplexProjection),
        RunConfig {
            // Denominators grow geometrically under the adaptive rule.
            n: Some(8),
            max_iterations: Some(10),
            ..RunConfig::new(Preset::Rational)
        },
    ];
    let mut rows = 0;
    for cfg in configs {
        let cfg = RunConfig {
            variants: variants.clone(),
            step: Some(StepChoice::Adaptive),
            ..cfg
        };
        let report = harness::execute(&cfg).map_err(|e| format!("{}: {e}", cfg.preset))?;
        for v in &report.variants {
            for pair in v.rows.windows(2) {
                ensure(pair[1].primal <= pair[0].primal, || {
                    format!(
                        "{} {}: f rose {} -> {} at t={}",
                        cfg.preset, v.summary.variant, pair[0].primal, pair[1].primal, pair[1].iteration
                    )
                })?;
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} consecutive row pairs non-increasing across 5 presets"))
}

fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn random_l1_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let s: f64 = raw.iter().map(|v| v.abs()).sum();
    let scale = radius * rng.random_range(0.1..1.0) / s;
    raw.into_iter().map(|v| v * scale).collect()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let h = 1e-6;
    let n = 10;
    let target: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..5.0)).collect();
    let reg = generate_sparse_regression(&SparseRegressionParams {
        n_features: 4,
        degree: 3,
        n_train: 200,
        n_test: 50,
        seed: 4,
        ..SparseRegressionParams::default()
    })
    .map_err(|e| e.to_string())?;
    let comp = matrix_completion_instance(&MatrixCompletionParams {
        rows: 12,
        cols: 9,
        rank: 2,
        seed: 5,
        ..MatrixCompletionParams::default()
    })
    .map_err(|e| e.to_string())?;
    let pool = reg.train.features().clone();
    let stochastic = StochasticLinearOracle::new(pool, reg.train.targets().to_vec(), 0).map_err(|e| e.to_string())?;
    let radius = reg.l1_radius();
    let tau = comp.radius_hint();
    let m = reg.train.features().cols;

    let mut objectives: Vec<(&str, Box<dyn Objective<f64>>, Box<dyn Fn(&mut ChaCha8Rng) -> Vec<f64>>)> = vec![
        (
            "squared-norm",
            Box::new(SquaredNorm { dim: n }),
            Box::new(move |r| random_simplex_point(r, n)),
        ),
        (
            "squared-distance",
            Box::new(SquaredDistance::new(target.clone())),
            Box::new(move |r| random_simplex_point(r, n)),
        ),
        (
            "weighted-distance",
            Box::new(WeightedSquaredDistance {
                weights,
                target: target.clone(),
            }),
            Box::new(move |r| random_simplex_point(r, n)),
        ),
        (
            "linear",
            Box::new(LinearObjective {
                coefficients: target.clone(),
            }),
            Box::new(move |r| random_simplex_point(r, n)),
        ),
        (
            "regression",
            Box::new(reg.train.clone()),
            Box::new(move |r| random_l1_point(r, m, radius)),
        ),
        (
            "stochastic-pool",
            Box::new(stochastic),
            Box::new(move |r| random_l1_point(r, m, radius)),
        ),
        (
            "matrix-completion",
            Box::new(comp.train.clone()),
            Box::new(move |r| {
                // Random rank-two point inside the nuclear ball.
                let mut x = vec![0.0; 12 * 9];
                for _ in 0..2 {
                    let u: Vec<f64> = (0..12).map(|_| r.random_range(-1.0..1.0)).collect();
                    let v: Vec<f64> = (0..9).map(|_| r.random_range(-1.0..1.0)).collect();
                    let norm = dense_dot(&u, &u).sqrt() * dense_dot(&v, &v).sqrt();
                    for i in 0..12 {
                        for j in 0..9 {
                            x[i * 9 + j] += 0.4 * tau * u[i] * v[j] / norm;
                        }
                    }
                }
                x
            }),
        ),
    ];
    let mut worst: f64 = 0.0;
    for (name, f, point) in objectives.iter_mut() {
        for k in 0..10 {
            let x = point(&mut rng);
            let err = finite_diff_check(f.as_mut(), &x, h, k).map_err(|e| e.to_string())?;
            worst = worst.max(err);
            ensure(err <= 1e-5, || format!("{name} point {k}: error {err:e}"))?;
        }
    }
    Ok(format!(
        "{} objectives x 10 points, worst error {worst:.1e}",
        objectives.len()
    ))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for n in [3, 5, 8] {
        let target: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..1.0)).collect();
        let closed = ProbabilitySimplex::new(n, 1.0);
        let enumerated = EnumeratedVertices::simplex(n, 1.0).map_err(|e| e.to_string())?;
        for (name, step) in [
            ("adaptive", StepRule::adaptive()),
            ("line-search", StepRule::line_search()),
        ] {
            let params = RunParams {
                max_iterations: 200,
                epsilon: 1e-12,
                step,
                ..RunParams::default()
            };
            let lazy = RunParams {
                lazy: true,
                ..params.clone()
            };
            type Runner = fn(
                &mut SquaredDistance<f64>,
                &dyn LinearMinimizationOracle<f64>,
                Atom<f64>,
                &RunParams<f64>,
            ) -> cgkit::Result<SolverResult<f64>>;
            let runners: [(&str, Runner, &RunParams<f64>); 5] = [
                ("fw", |f, l, x, p| frank_wolfe(f, l, x, p, ()), &params),
                ("lfw", |f, l, x, p| lazified_frank_wolfe(f, l, x, p, ()), &params),
                ("afw", |f, l, x, p| away_frank_wolfe(f, l, x, p, ()), &params),
                ("lafw", |f, l, x, p| away_frank_wolfe(f, l, x, p, ()), &lazy),
                ("bcg", |f, l, x, p| blended_cg(f, l, x, p, ()), &params),
            ];
            for (variant, run, p) in runners {
                let x0 = Atom::scaled_unit(n, n - 1, 1.0).map_err(|e| e.to_string())?;
                let a = run(&mut SquaredDistance::new(target.clone()), &closed, x0.clone(), p)
                    .map_err(|e| e.to_string())?;
                let b =
                    run(&mut SquaredDistance::new(target.clone()), &enumerated, x0, p).map_err(|e| e.to_string())?;
                let pa: Vec<(f64, StepKind)> = a.trajectory.iter().map(|r| (r.primal, r.step_kind)).collect();
                let pb: Vec<(f64, StepKind)> = b.trajectory.iter().map(|r| (r.primal, r.step_kind)).collect();
                ensure(pa == pb, || format!("{variant} ({name}) n={n}: sequences differ"))?;
                compared += pa.len();
            }
        }
    }
    Ok(format!("{compared} rows identical across 30 paired runs"))
}

fn strip_elapsed(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            l.split(',')
                .enumerate()
                .filter(|(i, _)| *i != 2)
                .map(|(_, c)| c)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn criterion_12() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_cgkit");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases: [&[&str]; 3] = [
        &[
            "--preset",
            "birkhoff",
            "--n",
            "6",
            "--variants",
            "fw,lfw,afw,lafw,bcg,sfw",
            "--max-iterations",
            "300",
        ],
        &[
            "--preset",
            "polyreg",
            "--n",
            "4",
            "--variants",
            "fw,lafw,bcg,sfw,pgd-reference",
            "--max-iterations",
            "60",
        ],
        &[
            "--preset",
            "matcomp",
            "--n",
            "15",
            "--variants",
            "fw,bcg,sfw,pgd-reference",
            "--max-iterations",
            "60",
        ],
    ];
    let mut rows = 0;
    for (k, args) in cases.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("case{k}_{rep}.csv"));
            let status = Command::new(bin)
                .arg("run")
                .args(*args)
                .args(["--seed", "7", "--output"])
                .arg(&path)
                .env_remove("CGKIT_SEED")
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.success(), || {
                format!("case {k}: {}", String::from_utf8_lossy(&status.stderr))
            })?;
            outputs.push(read(&path)?);
        }
        let (a, b) = (strip_elapsed(&outputs[0]), strip_elapsed(&outputs[1]));
        ensure(a == b, || format!("case {k}: CSV differs between runs"))?;
        rows += a.lines().count() - 1;
    }
    Ok(format!(
        "3 presets, {rows} rows byte-identical apart from elapsed_seconds"
    ))
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("oracle exactness", criterion_1),
        ("hungarian correctness", criterion_2),
        ("nuclear-norm oracle", criterion_3),
        ("agnostic convergence bound", criterion_4),
        ("away steps vs zig-zag", criterion_5),
        ("exact rational run", criterion_6),
        ("lazification economy", criterion_7),
        ("sparsity", criterion_8),
        ("adaptive descent", criterion_9),
        ("gradient correctness", criterion_10),
        ("oracle interchangeability", criterion_11),
        ("determinism", criterion_12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| *f == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail} [{secs:.2} s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name}: {detail} [{secs:.2} s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
