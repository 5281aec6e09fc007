//! Zig-zagging of vanilla Frank-Wolfe when the optimum sits on a face of
//! the simplex, and the linear rate recovered by away steps.

use cgkit::lmo::ProbabilitySimplex;
use cgkit::problems::{Objective, WeightedSquaredDistance};
use cgkit::solvers::{away_frank_wolfe, frank_wolfe, RunParams, StepKind};
use cgkit::steps::StepRule;
use cgkit::Atom;

fn main() -> cgkit::Result<()> {
    let weights = vec![1.0, 3.0, 7.0, 2.0, 10.0, 5.0, 4.0, 8.0];
    let p = [0.4, 0.25, 0.2, 0.15, 0.0, 0.0, 0.0, 0.0];
    // Optimality on the face {x_4..x_7 = 0} with multiplier -0.2.
    let target: Vec<f64> = (0..8)
        .map(|i| {
            if p[i] > 0.0 {
                p[i] + 0.1 / weights[i]
            } else {
                0.1 / weights[i] - 0.2
            }
        })
        .collect();
    let mut f = WeightedSquaredDistance { weights, target };
    let f_star = f.value(&p);
    let params = RunParams {
        max_iterations: 500,
        epsilon: 1e-15,
        step: StepRule::line_search(),
        ..RunParams::default()
    };
    let lmo = ProbabilitySimplex::new(8, 1.0);
    let fw = frank_wolfe(&mut f.clone(), &lmo, Atom::scaled_unit(8, 7, 1.0)?, &params, ())?;
    let afw = away_frank_wolfe(&mut f, &lmo, Atom::scaled_unit(8, 7, 1.0)?, &params, ())?;
    for t in [0, 5, 10, 20, 50, 100, 500] {
        let gap = |r: &cgkit::solvers::SolverResult<f64>| r.trajectory.get(t).map(|x| x.primal - f_star);
        let fmt = |g: Option<f64>| g.map_or("-".to_string(), |g| format!("{g:.3e}"));
        println!("t={t:<4} fw {:>10}   afw {:>10}", fmt(gap(&fw)), fmt(gap(&afw)));
    }
    let drops = afw.trajectory.iter().filter(|r| r.step_kind == StepKind::Drop).count();
    println!("afw took {drops} drop steps and stopped: {}", afw.termination.as_str());
    Ok(())
}
