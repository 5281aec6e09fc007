//! Objectives, instance generators and gradient checking.

mod completion;
mod finite_diff;
mod monomials;
mod regression;
mod simple;
mod stochastic;

pub use completion::{
    matrix_completion_instance, MatrixCompletionInstance, MatrixCompletionObjective, MatrixCompletionParams,
};
pub use finite_diff::finite_diff_check;
pub use monomials::{build_monomial_features, monomial_count, monomial_exponents, MonomialOptions};
pub use regression::{
    generate_sparse_regression, NoiseModel, QuadraticRegression, SparseRegressionDescriptor, SparseRegressionInstance,
    SparseRegressionParams,
};
pub use simple::{FnObjective, LinearObjective, SquaredDistance, SquaredNorm, WeightedSquaredDistance};
pub use stochastic::{sample_batch, ExactGradientOracle, SamplingMode, StochasticLinearOracle, StochasticOracle};

use crate::scalar::Scalar;

/// Smooth objective with an in-place gradient.
///
/// `gradient` must fully overwrite `storage` and must not allocate
/// gradient-sized temporaries. Methods take `&mut self` so implementations
/// can keep evaluation workspaces.
pub trait Objective<S: Scalar> {
    fn dim(&self) -> usize;

    fn value(&mut self, x: &[S]) -> S;

    fn gradient(&mut self, x: &[S], storage: &mut [S]);
}

impl<S: Scalar, T: Objective<S> + ?Sized> Objective<S> for &mut T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&mut self, x: &[S]) -> S {
        (**self).value(x)
    }

    fn gradient(&mut self, x: &[S], storage: &mut [S]) {
        (**self).gradient(x, storage)
    }
}

impl<S: Scalar, T: Objective<S> + ?Sized> Objective<S> for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&mut self, x: &[S]) -> S {
        (**self).value(x)
    }

    fn gradient(&mut self, x: &[S], storage: &mut [S]) {
        (**self).gradient(x, storage)
    }
}
