//! Euclidean projection onto the probability simplex with the vanilla and
//! away-step variants, compared against the sort-based closed form.

use cgkit::harness::pgd::project_simplex;
use cgkit::lmo::ProbabilitySimplex;
use cgkit::problems::SquaredDistance;
use cgkit::solvers::{away_frank_wolfe, frank_wolfe, RunParams};
use cgkit::Atom;

fn main() -> cgkit::Result<()> {
    let n = 30;
    let target: Vec<f64> = (0..n).map(|i| ((i * 7919) % 31) as f64 / 31.0 - 0.3).collect();
    let exact = project_simplex(&target, 1.0);
    let lmo = ProbabilitySimplex::new(n, 1.0);
    let params = RunParams::default();

    let fw = frank_wolfe(
        &mut SquaredDistance::new(target.clone()),
        &lmo,
        Atom::scaled_unit(n, 0, 1.0)?,
        &params,
        (),
    )?;
    let afw = away_frank_wolfe(
        &mut SquaredDistance::new(target),
        &lmo,
        Atom::scaled_unit(n, 0, 1.0)?,
        &params,
        (),
    )?;
    for (name, r) in [("fw", &fw), ("afw", &afw)] {
        let err = r.x.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!(
            "{name:>4}: {:>5} iterations, gap {:.2e}, max deviation from projection {err:.2e}, termination {}",
            r.iterations,
            r.dual_gap,
            r.termination.as_str()
        );
    }
    Ok(())
}
