use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Objective;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Stochastic first-order oracle.
pub trait StochasticOracle {
    fn dim(&self) -> usize;

    /// Writes an unbiased gradient estimate averaged over `batch` draws.
    fn sample_gradient(&mut self, x: &[f64], batch: usize, out: &mut [f64]) -> Result<()>;

    /// Exact objective value, when it can be computed.
    fn full_value(&mut self, x: &[f64]) -> Option<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMode {
    #[default]
    WithReplacement,
    /// Distinct indices within a batch; a batch of the pool size yields the
    /// full gradient.
    WithoutReplacement,
}

/// Least-squares pool `f(x) = sum_k (<a_k, x> - y_k)^2` with a seeded sampler.
///
/// A single draw of sample `k` returns `K * 2 (<a_k, x> - y_k) a_k`, whose
/// expectation is the full gradient.
#[derive(Debug, Clone)]
pub struct StochasticLinearOracle {
    samples: DenseMatrix,
    targets: Vec<f64>,
    rng: ChaCha8Rng,
    pub mode: SamplingMode,
}

impl StochasticLinearOracle {
    pub fn new(samples: DenseMatrix, targets: Vec<f64>, seed: u64) -> Result<Self> {
        if samples.rows != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: samples.rows,
                found: targets.len(),
            });
        }
        if samples.rows == 0 {
            return Err(Error::InvalidParameter("empty sample pool".into()));
        }
        Ok(Self {
            samples,
            targets,
            rng: ChaCha8Rng::seed_from_u64(seed),
            mode: SamplingMode::WithReplacement,
        })
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn pool_size(&self) -> usize {
        self.samples.rows
    }

    pub fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    fn residual(&self, k: usize, x: &[f64]) -> f64 {
        self.samples.row(k).iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - self.targets[k]
    }

    fn accumulate(&self, k: usize, x: &[f64], weight: f64, out: &mut [f64]) {
        let c = weight * 2.0 * self.residual(k, x);
        for (o, a) in out.iter_mut().zip(self.samples.row(k)) {
            *o += c * a;
        }
    }
}

impl StochasticOracle for StochasticLinearOracle {
    fn dim(&self) -> usize {
        self.samples.cols
    }

    fn sample_gradient(&mut self, x: &[f64], batch: usize, out: &mut [f64]) -> Result<()> {
        if batch == 0 {
            return Err(Error::ZeroBatch);
        }
        let pool = self.pool_size();
        let weight = pool as f64 / batch as f64;
        out.iter_mut().for_each(|o| *o = 0.0);
        match self.mode {
            SamplingMode::WithReplacement => {
                for _ in 0..batch {
                    let k = self.rng.random_range(0..pool);
                    self.accumulate(k, x, weight, out);
                }
            }
            SamplingMode::WithoutReplacement => {
                if batch > pool {
                    return Err(Error::InvalidParameter(format!(
                        "batch {batch} exceeds pool size {pool} without replacement"
                    )));
                }
                let mut picks = sample(&mut self.rng, pool, batch).into_vec();
                picks.sort_unstable();
                for k in picks {
                    self.accumulate(k, x, weight, out);
                }
            }
        }
        Ok(())
    }

    fn full_value(&mut self, x: &[f64]) -> Option<f64> {
        Some((0..self.pool_size()).map(|k| self.residual(k, x).powi(2)).sum())
    }
}

impl Objective<f64> for StochasticLinearOracle {
    fn dim(&self) -> usize {
        self.samples.cols
    }

    fn value(&mut self, x: &[f64]) -> f64 {
        (0..self.pool_size()).map(|k| self.residual(k, x).powi(2)).sum()
    }

    fn gradient(&mut self, x: &[f64], storage: &mut [f64]) {
        storage.iter_mut().for_each(|g| *g = 0.0);
        for k in 0..self.pool_size() {
            self.accumulate(k, x, 1.0, storage);
        }
    }
}

/// Deterministic "stochastic" oracle returning the exact gradient of an
/// objective for every batch size.
#[derive(Debug, Clone)]
pub struct ExactGradientOracle<F> {
    pub objective: F,
}

impl<F: Objective<f64>> StochasticOracle for ExactGradientOracle<F> {
    fn dim(&self) -> usize {
        self.objective.dim()
    }

    fn sample_gradient(&mut self, x: &[f64], batch: usize, out: &mut [f64]) -> Result<()> {
        if batch == 0 {
            return Err(Error::ZeroBatch);
        }
        self.objective.gradient(x, out);
        Ok(())
    }

    fn full_value(&mut self, x: &[f64]) -> Option<f64> {
        Some(self.objective.value(x))
    }
}

/// Fills `buffer` with the average of `batch` single-sample gradients at `x`.
pub fn sample_batch<O: StochasticOracle + ?Sized>(
    oracle: &mut O,
    x: &[f64],
    batch: usize,
    buffer: &mut [f64],
) -> Result<()> {
    if buffer.len() != oracle.dim() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dim(),
            found: buffer.len(),
        });
    }
    oracle.sample_gradient(x, batch, buffer)
}
