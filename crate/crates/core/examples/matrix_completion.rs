//! Low-rank matrix completion over the nuclear-norm ball; reports the held
//! out RMSE and the rank of the Frank-Wolfe iterate.

use cgkit::harness::pgd::numerical_rank;
use cgkit::lmo::NuclearNormBall;
use cgkit::problems::{matrix_completion_instance, MatrixCompletionParams, Objective};
use cgkit::solvers::{blended_cg, frank_wolfe, RunParams};
use cgkit::LinearMinimizationOracle;

fn main() -> cgkit::Result<()> {
    let params = MatrixCompletionParams::default();
    let inst = matrix_completion_instance(&params)?;
    let (rows, cols) = (params.rows, params.cols);
    let run = RunParams {
        max_iterations: 300,
        ..RunParams::default()
    };
    // The preset radius is loose; a tighter ball regularizes.
    for radius in [inst.radius_hint(), 2.0 * inst.sigma_max] {
        let lmo = NuclearNormBall::new(rows, cols, radius);
        let mut g = vec![0.0; rows * cols];
        inst.train.clone().gradient(&vec![0.0; rows * cols], &mut g);
        let x0 = lmo.compute_extreme_point(&g)?;
        let fw = frank_wolfe(&mut inst.train.clone(), &lmo, x0.clone(), &run, ())?;
        let bcg = blended_cg(&mut inst.train.clone(), &lmo, x0, &run, ())?;
        println!("radius {radius:.1}");
        for (name, r) in [("fw", fw), ("bcg", bcg)] {
            println!(
                "{name:>5}: train f {:.4e}, test rmse {:.4}, rank {}, {} atoms",
                r.primal,
                inst.test.rmse(&r.x),
                numerical_rank(&r.x, rows, cols, 1e-8),
                r.active_set.map_or(0, |s| s.len())
            );
        }
    }
    Ok(())
}
