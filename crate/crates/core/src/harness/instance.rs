use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::json;

use super::config::{Preset, RunConfig};
use super::pgd::project_simplex;
use crate::error::{Error, Result};
use crate::lmo::top_singular_pair;
use crate::lmo::PowerIteration;
use crate::problems::{
    generate_sparse_regression, matrix_completion_instance, MatrixCompletionInstance, MatrixCompletionObjective,
    MatrixCompletionParams, Objective, SparseRegressionInstance, SparseRegressionParams, SquaredDistance,
    StochasticOracle,
};

/// Generated data for one preset.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Instance {
    Polyreg(SparseRegressionInstance),
    Matcomp(MatrixCompletionInstance),
    Birkhoff { n: usize, target: Vec<f64> },
    Rational { n: usize },
    SimplexProjection { target: Vec<f64>, reference: Vec<f64> },
}

/// Uniform `[0, 1)` entries of an `n x n` target matrix, row-major.
pub fn birkhoff_target(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n * n).map(|_| rng.random::<f64>()).collect()
}

/// Standard Gaussian point in `R^n`.
pub fn gaussian_point(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

impl Instance {
    pub fn build(cfg: &RunConfig) -> Result<Self> {
        let seed = cfg.seed;
        Ok(match cfg.preset {
            Preset::Polyreg => {
                let mut params = SparseRegressionParams {
                    seed,
                    ..SparseRegressionParams::default()
                };
                if let Some(n) = cfg.n {
                    params.n_features = n;
                }
                Instance::Polyreg(generate_sparse_regression(&params)?)
            }
            Preset::Matcomp => {
                let mut params = MatrixCompletionParams {
                    seed,
                    ..MatrixCompletionParams::default()
                };
                if let Some(n) = cfg.n {
                    params.rows = n;
                    params.cols = (4 * n / 5).max(1);
                    params.rank = params.rank.min(params.cols).min(n);
                }
                Instance::Matcomp(matrix_completion_instance(&params)?)
            }
            Preset::Birkhoff => {
                let n = cfg.n.unwrap_or(20);
                Instance::Birkhoff {
                    n,
                    target: birkhoff_target(n, seed),
                }
            }
            Preset::Rational => Instance::Rational {
                n: cfg.n.unwrap_or(100),
            },
            Preset::SimplexProjection => {
                let target = gaussian_point(cfg.n.unwrap_or(100), seed);
                let reference = project_simplex(&target, 1.0);
                Instance::SimplexProjection { target, reference }
            }
        })
    }

    /// Smoothness constant of the preset objective, for short steps.
    pub fn lipschitz(&self) -> Result<f64> {
        match self {
            Instance::Polyreg(inst) => {
                let a = inst.train.features();
                let s = top_singular_pair(&a.data, a.rows, a.cols, PowerIteration::default())?.sigma;
                Ok(2.0 * s * s)
            }
            _ => Ok(2.0),
        }
    }

    /// Replayable description written into the JSON summary.
    pub fn describe(&self) -> serde_json::Value {
        match self {
            Instance::Polyreg(inst) => {
                let d = inst.descriptor();
                json!({
                    "params": d.params,
                    "n_monomials": d.n_monomials,
                    "support": d.support,
                    "l1_radius": inst.l1_radius(),
                })
            }
            Instance::Matcomp(inst) => json!({
                "params": inst.params,
                "observed": inst.train.observed.len(),
                "held_out": inst.test.observed.len(),
                "sigma_max": inst.sigma_max,
                "radius": inst.radius_hint(),
                "unobserved_line": inst.unobserved_line,
            }),
            Instance::Birkhoff { n, .. } => json!({ "n": n }),
            Instance::Rational { n } => json!({ "n": n, "radius": "1" }),
            Instance::SimplexProjection { target, reference } => {
                let value = SquaredDistance::new(target.clone()).value(reference);
                json!({ "n": target.len(), "reference_primal": value })
            }
        }
    }
}

/// Stochastic oracle over the observed entries of a completion problem:
/// each draw picks one observed entry uniformly with replacement.
#[derive(Debug, Clone)]
pub struct EntrySampler {
    objective: MatrixCompletionObjective,
    rng: ChaCha8Rng,
}

impl EntrySampler {
    pub fn new(objective: MatrixCompletionObjective, seed: u64) -> Result<Self> {
        if objective.observed.is_empty() {
            return Err(Error::InvalidParameter("no observed entries to sample".into()));
        }
        Ok(Self {
            objective,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }
}

impl StochasticOracle for EntrySampler {
    fn dim(&self) -> usize {
        self.objective.rows * self.objective.cols
    }

    fn sample_gradient(&mut self, x: &[f64], batch: usize, out: &mut [f64]) -> Result<()> {
        if batch == 0 {
            return Err(Error::ZeroBatch);
        }
        let pool = self.objective.observed.len();
        let weight = pool as f64 / batch as f64;
        out.iter_mut().for_each(|o| *o = 0.0);
        for _ in 0..batch {
            let k = self.rng.random_range(0..pool);
            let idx = self.objective.observed[k];
            out[idx] += weight * 2.0 * (x[idx] - self.objective.values[k]);
        }
        Ok(())
    }

    fn full_value(&mut self, x: &[f64]) -> Option<f64> {
        Some(self.objective.value(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_sampler_is_unbiased_on_average() {
        let objective = MatrixCompletionObjective::new(2, 2, vec![0, 3], vec![1.0, -1.0]).unwrap();
        let mut sampler = EntrySampler::new(objective.clone(), 5).unwrap();
        let x = [0.5, 0.0, 0.0, 0.5];
        let mut exact = vec![0.0; 4];
        objective.clone().gradient(&x, &mut exact);
        let mut mean = vec![0.0; 4];
        let mut g = vec![0.0; 4];
        let draws = 20_000;
        for _ in 0..draws {
            sampler.sample_gradient(&x, 1, &mut g).unwrap();
            for (m, v) in mean.iter_mut().zip(&g) {
                *m += v / draws as f64;
            }
        }
        for (m, e) in mean.iter().zip(&exact) {
            assert!((m - e).abs() < 0.05, "{m} vs {e}");
        }
    }

    #[test]
    fn preset_sizes_follow_n() {
        let cfg = RunConfig {
            n: Some(4),
            ..RunConfig::new(Preset::Birkhoff)
        };
        match Instance::build(&cfg).unwrap() {
            Instance::Birkhoff { n, target } => {
                assert_eq!(n, 4);
                assert_eq!(target.len(), 16);
            }
            _ => unreachable!(),
        }
    }
}
