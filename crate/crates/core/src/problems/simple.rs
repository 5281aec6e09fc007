use super::Objective;
use crate::scalar::{dot, Scalar};

/// `f(x) = ||x||^2`.
#[derive(Debug, Clone, Copy)]
pub struct SquaredNorm {
    pub dim: usize,
}

impl<S: Scalar> Objective<S> for SquaredNorm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&mut self, x: &[S]) -> S {
        dot(x, x)
    }

    fn gradient(&mut self, x: &[S], storage: &mut [S]) {
        let two = S::from_i64(2);
        for (g, xi) in storage.iter_mut().zip(x) {
            *g = two.clone() * xi.clone();
        }
    }
}

/// `f(x) = ||x - target||^2`.
#[derive(Debug, Clone)]
pub struct SquaredDistance<S> {
    pub target: Vec<S>,
}

impl<S: Scalar> SquaredDistance<S> {
    pub fn new(target: Vec<S>) -> Self {
        Self { target }
    }
}

impl<S: Scalar> Objective<S> for SquaredDistance<S> {
    fn dim(&self) -> usize {
        self.target.len()
    }

    fn value(&mut self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (xi, ti) in x.iter().zip(&self.target) {
            let r = xi.clone() - ti.clone();
            acc += r.clone() * r;
        }
        acc
    }

    fn gradient(&mut self, x: &[S], storage: &mut [S]) {
        let two = S::from_i64(2);
        for ((g, xi), ti) in storage.iter_mut().zip(x).zip(&self.target) {
            *g = two.clone() * (xi.clone() - ti.clone());
        }
    }
}

/// `f(x) = sum_i w_i (x_i - target_i)^2` with positive weights.
#[derive(Debug, Clone)]
pub struct WeightedSquaredDistance<S> {
    pub weights: Vec<S>,
    pub target: Vec<S>,
}

impl<S: Scalar> Objective<S> for WeightedSquaredDistance<S> {
    fn dim(&self) -> usize {
        self.target.len()
    }

    fn value(&mut self, x: &[S]) -> S {
        let mut acc = S::zero();
        for ((xi, ti), wi) in x.iter().zip(&self.target).zip(&self.weights) {
            let r = xi.clone() - ti.clone();
            acc += wi.clone() * r.clone() * r;
        }
        acc
    }

    fn gradient(&mut self, x: &[S], storage: &mut [S]) {
        let two = S::from_i64(2);
        for (((g, xi), ti), wi) in storage.iter_mut().zip(x).zip(&self.target).zip(&self.weights) {
            *g = two.clone() * wi.clone() * (xi.clone() - ti.clone());
        }
    }
}

/// `f(x) = <c, x>`.
#[derive(Debug, Clone)]
pub struct LinearObjective<S> {
    pub coefficients: Vec<S>,
}

impl<S: Scalar> Objective<S> for LinearObjective<S> {
    fn dim(&self) -> usize {
        self.coefficients.len()
    }

    fn value(&mut self, x: &[S]) -> S {
        dot(&self.coefficients, x)
    }

    fn gradient(&mut self, _x: &[S], storage: &mut [S]) {
        storage.clone_from_slice(&self.coefficients);
    }
}

/// Objective assembled from two closures.
pub struct FnObjective<F, G> {
    dim: usize,
    value: F,
    gradient: G,
}

impl<F, G> FnObjective<F, G> {
    pub fn new(dim: usize, value: F, gradient: G) -> Self {
        Self { dim, value, gradient }
    }
}

impl<S, F, G> Objective<S> for FnObjective<F, G>
where
    S: Scalar,
    F: FnMut(&[S]) -> S,
    G: FnMut(&[S], &mut [S]),
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&mut self, x: &[S]) -> S {
        (self.value)(x)
    }

    fn gradient(&mut self, x: &[S], storage: &mut [S]) {
        (self.gradient)(x, storage)
    }
}
