use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Objective;
use crate::error::{Error, Result};
use crate::lmo::{top_singular_pair, PowerIteration};

/// `f(X) = sum_{(i,j) in I} (X_ij - Y_ij)^2` over a row-major `rows x cols`
/// matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCompletionObjective {
    pub rows: usize,
    pub cols: usize,
    /// Flat indices `i * cols + j` of observed entries.
    pub observed: Vec<usize>,
    pub values: Vec<f64>,
}

impl MatrixCompletionObjective {
    pub fn new(rows: usize, cols: usize, observed: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if observed.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: observed.len(),
                found: values.len(),
            });
        }
        if let Some(&bad) = observed.iter().find(|&&k| k >= rows * cols) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: rows * cols,
            });
        }
        Ok(Self {
            rows,
            cols,
            observed,
            values,
        })
    }

    /// Root mean squared error over the listed entries.
    pub fn rmse(&self, x: &[f64]) -> f64 {
        if self.observed.is_empty() {
            return 0.0;
        }
        (self.sum_sq(x) / self.observed.len() as f64).sqrt()
    }

    fn sum_sq(&self, x: &[f64]) -> f64 {
        self.observed
            .iter()
            .zip(&self.values)
            .map(|(&k, y)| (x[k] - y) * (x[k] - y))
            .sum()
    }
}

impl Objective<f64> for MatrixCompletionObjective {
    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    fn value(&mut self, x: &[f64]) -> f64 {
        self.sum_sq(x)
    }

    fn gradient(&mut self, x: &[f64], storage: &mut [f64]) {
        storage.iter_mut().for_each(|g| *g = 0.0);
        for (&k, y) in self.observed.iter().zip(&self.values) {
            storage[k] = 2.0 * (x[k] - y);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCompletionParams {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub fraction_observed: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for MatrixCompletionParams {
    fn default() -> Self {
        Self {
            rows: 50,
            cols: 40,
            rank: 5,
            fraction_observed: 0.3,
            noise_sigma: 0.1,
            seed: 0,
        }
    }
}

/// Synthetic low-rank completion problem with a held-out test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCompletionInstance {
    pub params: MatrixCompletionParams,
    pub train: MatrixCompletionObjective,
    pub test: MatrixCompletionObjective,
    /// Largest singular value of the fully observed (noisy) matrix.
    pub sigma_max: f64,
    /// Set when some row or column has no observed entry.
    pub unobserved_line: bool,
}

impl MatrixCompletionInstance {
    /// Nuclear-norm radius preset: ten times the top singular value.
    pub fn radius_hint(&self) -> f64 {
        10.0 * self.sigma_max
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `Y = U V^T + noise` with Gaussian factors of width `rank`; a uniformly
/// random subset of entries, drawn without replacement, is observed.
pub fn matrix_completion_instance(params: &MatrixCompletionParams) -> Result<MatrixCompletionInstance> {
    let (m, n, r) = (params.rows, params.cols, params.rank);
    if r == 0 || r > m.min(n) {
        return Err(Error::InvalidParameter(format!("rank {r} outside 1..={}", m.min(n))));
    }
    if !(params.fraction_observed > 0.0 && params.fraction_observed <= 1.0) {
        return Err(Error::InvalidParameter("fraction_observed must be in (0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let gauss = |len: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    };
    let u = gauss(m * r, &mut rng);
    let v = gauss(n * r, &mut rng);
    let mut y = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..r {
                acc += u[i * r + k] * v[j * r + k];
            }
            y[i * n + j] = acc + params.noise_sigma * rng.sample::<f64, _>(StandardNormal);
        }
    }

    let total = m * n;
    let count = ((params.fraction_observed * total as f64).round() as usize).clamp(1, total);
    let mut observed = sample(&mut rng, total, count).into_vec();
    observed.sort_unstable();
    let mut mask = vec![false; total];
    observed.iter().for_each(|&k| mask[k] = true);
    let held_out: Vec<usize> = (0..total).filter(|&k| !mask[k]).collect();

    let mut row_seen = vec![false; m];
    let mut col_seen = vec![false; n];
    for &k in &observed {
        row_seen[k / n] = true;
        col_seen[k % n] = true;
    }
    let unobserved_line = row_seen.contains(&false) || col_seen.contains(&false);

    let sigma_max = top_singular_pair(&y, m, n, PowerIteration::default())?.sigma;
    let train_values = observed.iter().map(|&k| y[k]).collect();
    let test_values = held_out.iter().map(|&k| y[k]).collect();
    Ok(MatrixCompletionInstance {
        params: params.clone(),
        train: MatrixCompletionObjective::new(m, n, observed, train_values)?,
        test: MatrixCompletionObjective::new(m, n, held_out, test_values)?,
        sigma_max,
        unobserved_line,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fully_observed_noiseless_truth_is_stationary() {
        let params = MatrixCompletionParams {
            rows: 6,
            cols: 5,
            rank: 2,
            fraction_observed: 1.0,
            noise_sigma: 0.0,
            seed: 3,
        };
        let mut inst = matrix_completion_instance(&params).unwrap();
        assert!(inst.test.observed.is_empty());
        let mut y = vec![0.0; 30];
        for (&k, v) in inst.train.observed.iter().zip(&inst.train.values) {
            y[k] = *v;
        }
        assert_eq!(inst.train.value(&y), 0.0);
        let mut g = vec![1.0; 30];
        inst.train.gradient(&y, &mut g);
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gradient_support_is_observed_set() {
        let mut inst = matrix_completion_instance(&MatrixCompletionParams::default()).unwrap();
        let x = vec![0.5; 2000];
        let mut g = vec![0.0; 2000];
        inst.train.gradient(&x, &mut g);
        let mut mask = vec![false; 2000];
        inst.train.observed.iter().for_each(|&k| mask[k] = true);
        assert!(g.iter().zip(&mask).all(|(v, m)| *m || *v == 0.0));
        assert_eq!(inst.train.observed.len() + inst.test.observed.len(), 2000);
    }

    #[test]
    fn sparse_observation_warns() {
        let params = MatrixCompletionParams {
            rows: 20,
            cols: 20,
            rank: 1,
            fraction_observed: 0.01,
            noise_sigma: 0.0,
            seed: 1,
        };
        assert!(matrix_completion_instance(&params).unwrap().unobserved_line);
    }

    #[test]
    fn json_round_trip() {
        let params = MatrixCompletionParams {
            rows: 4,
            cols: 3,
            rank: 1,
            fraction_observed: 0.5,
            noise_sigma: 0.0,
            seed: 9,
        };
        let inst = matrix_completion_instance(&params).unwrap();
        let back = MatrixCompletionInstance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn rejects_bad_rank() {
        let params = MatrixCompletionParams {
            rank: 41,
            ..MatrixCompletionParams::default()
        };
        assert!(matrix_completion_instance(&params).is_err());
    }
}
