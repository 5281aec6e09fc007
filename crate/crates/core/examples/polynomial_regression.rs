//! Sparse polynomial regression over an l1 ball: monomial features of a
//! synthetic sparse model, fit with blended conditional gradients.

use cgkit::lmo::L1Ball;
use cgkit::problems::{generate_sparse_regression, Objective, SparseRegressionParams};
use cgkit::solvers::{blended_cg, RunParams};
use cgkit::LinearMinimizationOracle;

fn main() -> cgkit::Result<()> {
    let inst = generate_sparse_regression(&SparseRegressionParams {
        n_features: 6,
        degree: 3,
        n_train: 500,
        n_test: 500,
        ..SparseRegressionParams::default()
    })?;
    let m = inst.coefficients.len();
    let lmo = L1Ball::new(m, inst.l1_radius());
    let mut train = inst.train.clone();
    let mut g = vec![0.0; m];
    train.gradient(&vec![0.0; m], &mut g);
    let x0 = lmo.compute_extreme_point(&g)?;
    let r = blended_cg(
        &mut train,
        &lmo,
        x0,
        &RunParams {
            max_iterations: 200,
            ..RunParams::default()
        },
        (),
    )?;
    let support = inst.coefficients.iter().filter(|c| **c != 0.0).count();
    let found = r.x.iter().filter(|c| c.abs() > 1e-8).count();
    println!("{m} monomials, true support {support}, recovered support {found}");
    println!(
        "train mse {:.4}, test mse {:.4}",
        train.mean_squared_error(&r.x),
        inst.test.clone().mean_squared_error(&r.x)
    );
    Ok(())
}
