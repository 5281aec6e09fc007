use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::monomials::{build_monomial_features, monomial_count, MonomialOptions};
use super::Objective;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// `f(c) = ||y - A c||^2` with a shared residual workspace.
#[derive(Debug, Clone)]
pub struct QuadraticRegression {
    features: DenseMatrix,
    targets: Vec<f64>,
    residual: Vec<f64>,
}

impl QuadraticRegression {
    pub fn new(features: DenseMatrix, targets: Vec<f64>) -> Result<Self> {
        if features.rows != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: features.rows,
                found: targets.len(),
            });
        }
        let residual = vec![0.0; targets.len()];
        Ok(Self {
            features,
            targets,
            residual,
        })
    }

    pub fn features(&self) -> &DenseMatrix {
        &self.features
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    fn fill_residual(&mut self, c: &[f64]) {
        self.features.mul_vec(c, &mut self.residual);
        for (r, y) in self.residual.iter_mut().zip(&self.targets) {
            *r = y - *r;
        }
    }

    /// Mean squared prediction error.
    pub fn mean_squared_error(&mut self, c: &[f64]) -> f64 {
        let total = self.value(c);
        total / self.targets.len().max(1) as f64
    }
}

impl Objective<f64> for QuadraticRegression {
    fn dim(&self) -> usize {
        self.features.cols
    }

    fn value(&mut self, c: &[f64]) -> f64 {
        self.fill_residual(c);
        self.residual.iter().map(|r| r * r).sum()
    }

    fn gradient(&mut self, c: &[f64], storage: &mut [f64]) {
        self.fill_residual(c);
        self.features.mul_t_vec(&self.residual, storage);
        storage.iter_mut().for_each(|g| *g *= -2.0);
    }
}

/// Where observation noise enters the generating model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    /// Inputs are perturbed before the polynomial is evaluated; features use
    /// the clean inputs.
    Input,
    /// Gaussian noise added to the targets.
    Output,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseRegressionParams {
    pub n_features: usize,
    pub degree: usize,
    pub density: f64,
    pub noise_sigma: f64,
    pub noise_model: NoiseModel,
    pub n_train: usize,
    pub n_test: usize,
    pub seed: u64,
}

impl Default for SparseRegressionParams {
    fn default() -> Self {
        Self {
            n_features: 15,
            degree: 4,
            density: 0.05,
            noise_sigma: 1.0,
            noise_model: NoiseModel::Input,
            n_train: 1000,
            n_test: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SparseRegressionInstance {
    pub params: SparseRegressionParams,
    pub train: QuadraticRegression,
    pub test: QuadraticRegression,
    pub coefficients: Vec<f64>,
}

/// Replayable description of a generated regression instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseRegressionDescriptor {
    pub params: SparseRegressionParams,
    pub n_monomials: usize,
    pub support: Vec<usize>,
    pub coefficients: Vec<f64>,
}

impl SparseRegressionInstance {
    pub fn l1_radius(&self) -> f64 {
        0.95 * self.coefficients.iter().map(|c| c.abs()).sum::<f64>()
    }

    pub fn descriptor(&self) -> SparseRegressionDescriptor {
        let support = (0..self.coefficients.len())
            .filter(|&i| self.coefficients[i] != 0.0)
            .collect();
        SparseRegressionDescriptor {
            params: self.params.clone(),
            n_monomials: self.coefficients.len(),
            support,
            coefficients: self.coefficients.clone(),
        }
    }
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, sigma: f64) -> DenseMatrix {
    let data = (0..rows * cols)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    DenseMatrix::from_rows(rows, cols, data)
}

fn targets(
    rng: &mut ChaCha8Rng,
    inputs: &DenseMatrix,
    features: &DenseMatrix,
    coefficients: &[f64],
    params: &SparseRegressionParams,
) -> Result<Vec<f64>> {
    let mut y = vec![0.0; inputs.rows];
    match params.noise_model {
        NoiseModel::Input => {
            let noise = gaussian_matrix(rng, inputs.rows, inputs.cols, params.noise_sigma);
            let perturbed = DenseMatrix::from_rows(
                inputs.rows,
                inputs.cols,
                inputs.data.iter().zip(&noise.data).map(|(a, b)| a + b).collect(),
            );
            let noisy = build_monomial_features(&perturbed, params.degree, MonomialOptions::default())?;
            noisy.mul_vec(coefficients, &mut y);
        }
        NoiseModel::Output => {
            features.mul_vec(coefficients, &mut y);
            for v in y.iter_mut() {
                *v += params.noise_sigma * rng.sample::<f64, _>(StandardNormal);
            }
        }
    }
    Ok(y)
}

/// Sparse polynomial regression: Gaussian inputs, monomial features and a
/// coefficient vector with `ceil(density * m)` entries uniform on `(0, 10)`.
pub fn generate_sparse_regression(params: &SparseRegressionParams) -> Result<SparseRegressionInstance> {
    if !(params.density > 0.0 && params.density <= 1.0) {
        return Err(Error::InvalidParameter("density must be in (0, 1]".into()));
    }
    let m = monomial_count(params.n_features, params.degree)
        .ok_or_else(|| Error::InvalidParameter("monomial count overflow".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let nnz = ((params.density * m as f64).ceil() as usize).clamp(1, m);
    let mut coefficients = vec![0.0; m];
    let mut support = sample(&mut rng, m, nnz).into_vec();
    support.sort_unstable();
    for &i in &support {
        coefficients[i] = rng.random_range(f64::MIN_POSITIVE..10.0);
    }

    let build = |rows: usize, rng: &mut ChaCha8Rng| -> Result<QuadraticRegression> {
        let inputs = gaussian_matrix(rng, rows, params.n_features, 1.0);
        let features = build_monomial_features(&inputs, params.degree, MonomialOptions::default())?;
        let y = targets(rng, &inputs, &features, &coefficients, params)?;
        QuadraticRegression::new(features, y)
    };
    let train = build(params.n_train, &mut rng)?;
    let test = build(params.n_test.max(1), &mut rng)?;
    Ok(SparseRegressionInstance {
        params: params.clone(),
        train,
        test,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SparseRegressionParams {
        SparseRegressionParams {
            n_features: 3,
            degree: 2,
            density: 0.5,
            noise_sigma: 0.0,
            noise_model: NoiseModel::Output,
            n_train: 30,
            n_test: 10,
            seed,
        }
    }

    #[test]
    fn seed_determinism() {
        let a = generate_sparse_regression(&small(7)).unwrap();
        let b = generate_sparse_regression(&small(7)).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.train.targets(), b.train.targets());
        assert_eq!(a.train.features(), b.train.features());
    }

    #[test]
    fn support_size_and_range() {
        let inst = generate_sparse_regression(&small(1)).unwrap();
        // m = C(5, 2) - 1 = 9, ceil(0.5 * 9) = 5
        let nnz = inst.coefficients.iter().filter(|c| **c != 0.0).count();
        assert_eq!(nnz, 5);
        assert!(inst.coefficients.iter().all(|&c| (0.0..10.0).contains(&c)));
    }

    #[test]
    fn noiseless_truth_is_interpolating() {
        let mut inst = generate_sparse_regression(&small(3)).unwrap();
        let c = inst.coefficients.clone();
        assert!(inst.train.value(&c) < 1e-18);
    }

    #[test]
    fn consecutive_evaluations_bit_identical() {
        let mut inst = generate_sparse_regression(&small(5)).unwrap();
        let c = vec![0.3; inst.coefficients.len()];
        let a = inst.train.value(&c);
        let b = inst.train.value(&c);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn rejects_bad_density() {
        let mut p = small(0);
        p.density = 0.0;
        assert!(generate_sparse_regression(&p).is_err());
    }
}
