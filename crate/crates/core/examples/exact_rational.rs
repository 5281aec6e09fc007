//! Exact Frank-Wolfe over big rationals: minimize ||x||^2 on the simplex
//! with the short step and print the exact iterates.

use cgkit::lmo::ProbabilitySimplex;
use cgkit::problems::SquaredNorm;
use cgkit::solvers::{frank_wolfe, RunParams};
use cgkit::steps::StepRule;
use cgkit::{Atom, Rational, Scalar};

fn main() -> cgkit::Result<()> {
    let n = 8;
    let one = Rational::from_i64(1);
    let params = RunParams {
        max_iterations: 100,
        epsilon: Rational::from_ratio(1, 1_000_000),
        step: StepRule::short(Rational::from_i64(2)),
        ..RunParams::default()
    };
    let observer = |rec: &cgkit::solvers::TrajectoryRecord<Rational>, x: &[Rational]| {
        let shown: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        println!(
            "t={:<2} f={:<6} x=[{}]",
            rec.iteration,
            rec.primal.to_string(),
            shown.join(", ")
        );
        cgkit::solvers::Control::Continue
    };
    let r = frank_wolfe(
        &mut SquaredNorm { dim: n },
        &ProbabilitySimplex::new(n, one.clone()),
        Atom::scaled_unit(n, 0, one)?,
        &params,
        observer,
    )?;
    println!(
        "final primal {} with gap {} ({})",
        r.primal,
        r.dual_gap,
        r.termination.as_str()
    );
    Ok(())
}
