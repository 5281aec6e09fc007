//! A user-defined feasible region: the oracle for a box [lo, hi]^n plugged
//! into the away-step solver, with a closure objective.

use cgkit::lmo::OracleAnswer;
use cgkit::problems::FnObjective;
use cgkit::solvers::{away_frank_wolfe, RunParams};
use cgkit::{Atom, LinearMinimizationOracle};

struct BoxRegion {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl LinearMinimizationOracle<f64> for BoxRegion {
    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn extreme_point(&self, d: &[f64]) -> cgkit::Result<OracleAnswer<f64>> {
        let v = d
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(di, (l, h))| if *di > 0.0 { *l } else { *h })
            .collect();
        Ok(OracleAnswer::exact(Atom::Dense(v)))
    }
}

fn main() -> cgkit::Result<()> {
    let region = BoxRegion {
        lo: vec![-1.0, 0.0, 0.5],
        hi: vec![1.0, 2.0, 0.75],
    };
    let c = [3.0, 1.0, 0.0];
    let mut f = FnObjective::new(
        3,
        |x: &[f64]| x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>(),
        |x: &[f64], g: &mut [f64]| {
            g.iter_mut()
                .zip(x.iter().zip(&c))
                .for_each(|(gi, (a, b))| *gi = 2.0 * (a - b))
        },
    );
    let x0 = region.compute_extreme_point(&[0.0; 3])?;
    let r = away_frank_wolfe(&mut f, &region, x0, &RunParams::default(), ())?;
    println!(
        "x = {:?} after {} iterations (gap {:.1e})",
        r.x, r.iterations, r.dual_gap
    );
    Ok(())
}
