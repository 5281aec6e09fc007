//! Stochastic Frank-Wolfe on a least-squares pool with a quadratically
//! growing batch size.

use cgkit::harness::{BatchGrowth, BatchSchedule};
use cgkit::lmo::L1Ball;
use cgkit::problems::{generate_sparse_regression, Objective, SparseRegressionParams, StochasticLinearOracle};
use cgkit::solvers::{stochastic_fw, RunParams};
use cgkit::steps::StepRule;
use cgkit::Atom;

fn main() -> cgkit::Result<()> {
    let inst = generate_sparse_regression(&SparseRegressionParams {
        n_features: 5,
        degree: 2,
        n_train: 2000,
        ..SparseRegressionParams::default()
    })?;
    let m = inst.coefficients.len();
    let lmo = L1Ball::new(m, inst.l1_radius());
    let params = RunParams {
        max_iterations: 200,
        step: StepRule::Agnostic,
        ..RunParams::default()
    };
    for growth in [BatchGrowth::Constant, BatchGrowth::Quadratic] {
        let schedule = BatchSchedule {
            growth,
            base: 4,
            cap: 2000,
        };
        let mut oracle = StochasticLinearOracle::new(inst.train.features().clone(), inst.train.targets().to_vec(), 1)?;
        let r = stochastic_fw(
            &mut oracle,
            &lmo,
            Atom::scaled_unit(m, 0, inst.l1_radius())?,
            |t| schedule.size(t),
            |_| 1.0,
            &params,
            (),
        )?;
        let f = inst.train.clone().value(&r.x);
        println!(
            "{growth:?}: full objective {f:.4e}, final batch {}",
            schedule.size(r.iterations)
        );
    }
    Ok(())
}
