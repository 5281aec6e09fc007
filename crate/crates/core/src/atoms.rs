//! Structured extreme points and convex decompositions of iterates.
//!
//! All atoms live in a flat coordinate space. Matrix-valued atoms use
//! row-major layout: entry `(i, j)` of an `rows x cols` matrix sits at
//! `i * cols + j`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of a scalar with `sign(0) = +1`.
    pub fn of<S: Scalar>(value: &S) -> Self {
        if *value >= S::zero() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn apply<S: Scalar>(self, value: S) -> S {
        match self {
            Sign::Plus => value,
            Sign::Minus => -value,
        }
    }
}

/// An extreme point of a feasible region, stored in the cheapest exact form.
#[derive(Debug, Clone)]
pub enum Atom<S> {
    /// Arbitrary dense point.
    Dense(Vec<S>),
    /// `coeff * e_index` in a space of dimension `dim`.
    ScaledUnit { dim: usize, index: usize, coeff: S },
    /// `scale * sum_k signs[k] * e_{indices[k]}` with strictly increasing indices.
    SignedSupport {
        dim: usize,
        indices: Vec<usize>,
        signs: Vec<Sign>,
        scale: S,
    },
    /// Permutation matrix with a one at `(i, assignment[i])`.
    Permutation { assignment: Vec<usize> },
    /// `scale * left * right^T`; storage is `O(rows + cols)`.
    RankOne { left: Vec<S>, right: Vec<S>, scale: S },
}

impl<S: Scalar> Atom<S> {
    pub fn scaled_unit(dim: usize, index: usize, coeff: S) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        Ok(Atom::ScaledUnit { dim, index, coeff })
    }

    pub fn signed_support(dim: usize, indices: Vec<usize>, signs: Vec<Sign>, scale: S) -> Result<Self> {
        if indices.len() != signs.len() {
            return Err(Error::DimensionMismatch {
                expected: indices.len(),
                found: signs.len(),
            });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "support indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: last + 1,
                });
            }
        }
        Ok(Atom::SignedSupport {
            dim,
            indices,
            signs,
            scale,
        })
    }

    /// Validates that `assignment` is a bijection on `0..n`.
    pub fn permutation(assignment: Vec<usize>) -> Result<Self> {
        let n = assignment.len();
        let mut seen = vec![false; n];
        for &col in &assignment {
            if col >= n || seen[col] {
                return Err(Error::InvalidParameter(format!(
                    "assignment {assignment:?} is not a permutation"
                )));
            }
            seen[col] = true;
        }
        Ok(Atom::Permutation { assignment })
    }

    pub fn rank_one(left: Vec<S>, right: Vec<S>, scale: S) -> Self {
        Atom::RankOne { left, right, scale }
    }

    /// Dimension of the ambient (flattened) space.
    pub fn dim(&self) -> usize {
        match self {
            Atom::Dense(v) => v.len(),
            Atom::ScaledUnit { dim, .. } | Atom::SignedSupport { dim, .. } => *dim,
            Atom::Permutation { assignment } => assignment.len() * assignment.len(),
            Atom::RankOne { left, right, .. } => left.len() * right.len(),
        }
    }

    /// Number of stored coordinates.
    pub fn nnz(&self) -> usize {
        match self {
            Atom::Dense(v) => v.len(),
            Atom::ScaledUnit { .. } => 1,
            Atom::SignedSupport { indices, .. } => indices.len(),
            Atom::Permutation { assignment } => assignment.len(),
            Atom::RankOne { left, right, .. } => left.len() + right.len(),
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        let dim = self.dim();
        if dim != len {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: len,
            });
        }
        Ok(())
    }

    /// `<direction, atom>` in `O(nnz)` for structured atoms.
    pub fn inner(&self, direction: &[S]) -> Result<S> {
        self.check_dim(direction.len())?;
        Ok(match self {
            Atom::Dense(v) => crate::scalar::dot(direction, v),
            Atom::ScaledUnit { index, coeff, .. } => direction[*index].clone() * coeff.clone(),
            Atom::SignedSupport {
                indices, signs, scale, ..
            } => {
                let mut acc = S::zero();
                for (&i, &s) in indices.iter().zip(signs) {
                    acc += s.apply(direction[i].clone());
                }
                acc * scale.clone()
            }
            Atom::Permutation { assignment } => {
                let n = assignment.len();
                let mut acc = S::zero();
                for (row, &col) in assignment.iter().enumerate() {
                    acc += direction[row * n + col].clone();
                }
                acc
            }
            Atom::RankOne { left, right, scale } => {
                // left^T D right
                let cols = right.len();
                let mut acc = S::zero();
                for (i, u) in left.iter().enumerate() {
                    let row = &direction[i * cols..(i + 1) * cols];
                    acc += u.clone() * crate::scalar::dot(row, right);
                }
                acc * scale.clone()
            }
        })
    }

    /// Coordinate `flat` of the materialized atom.
    pub fn entry(&self, flat: usize) -> S {
        match self {
            Atom::Dense(v) => v[flat].clone(),
            Atom::ScaledUnit { index, coeff, .. } => {
                if flat == *index {
                    coeff.clone()
                } else {
                    S::zero()
                }
            }
            Atom::SignedSupport {
                indices, signs, scale, ..
            } => match indices.binary_search(&flat) {
                Ok(k) => signs[k].apply(scale.clone()),
                Err(_) => S::zero(),
            },
            Atom::Permutation { assignment } => {
                let n = assignment.len();
                if assignment[flat / n] == flat % n {
                    S::one()
                } else {
                    S::zero()
                }
            }
            Atom::RankOne { left, right, scale } => {
                let cols = right.len();
                scale.clone() * left[flat / cols].clone() * right[flat % cols].clone()
            }
        }
    }

    pub fn materialize(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        self.write_into(&mut out);
        out
    }

    /// Overwrites `out` with the dense atom.
    pub fn write_into(&self, out: &mut [S]) {
        debug_assert_eq!(out.len(), self.dim());
        match self {
            Atom::Dense(v) => out.clone_from_slice(v),
            Atom::RankOne { .. } => {
                for (k, o) in out.iter_mut().enumerate() {
                    *o = self.entry(k);
                }
            }
            _ => {
                out.iter_mut().for_each(|o| *o = S::zero());
                self.for_each_nonzero(|k, v| out[k] = v);
            }
        }
    }

    fn for_each_nonzero(&self, mut f: impl FnMut(usize, S)) {
        match self {
            Atom::Dense(v) => v.iter().enumerate().for_each(|(k, x)| f(k, x.clone())),
            Atom::ScaledUnit { index, coeff, .. } => f(*index, coeff.clone()),
            Atom::SignedSupport {
                indices, signs, scale, ..
            } => {
                for (&i, &s) in indices.iter().zip(signs) {
                    f(i, s.apply(scale.clone()));
                }
            }
            Atom::Permutation { assignment } => {
                let n = assignment.len();
                for (row, &col) in assignment.iter().enumerate() {
                    f(row * n + col, S::one());
                }
            }
            Atom::RankOne { .. } => {
                for k in 0..self.dim() {
                    f(k, self.entry(k));
                }
            }
        }
    }

    /// `out <- atom - x`, the Frank-Wolfe direction toward this atom.
    pub fn direction_from(&self, x: &[S], out: &mut [S]) -> Result<()> {
        self.check_dim(x.len())?;
        self.write_into(out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o = o.clone() - xi.clone();
        }
        Ok(())
    }

    /// `x <- x + gamma * (atom - x)`, i.e. `(1 - gamma) x + gamma * atom`.
    ///
    /// Coordinates off the support only see the scaling pass.
    pub fn blend_into(&self, x: &mut [S], gamma: &S) -> Result<()> {
        if *gamma < S::zero() || *gamma > S::one() {
            return Err(Error::InvalidStep {
                gamma: gamma.to_f64(),
                max: 1.0,
            });
        }
        self.check_dim(x.len())?;
        if matches!(self, Atom::Dense(_) | Atom::RankOne { .. }) {
            for (k, xi) in x.iter_mut().enumerate() {
                let a = self.entry(k);
                *xi = xi.clone() + gamma.clone() * (a - xi.clone());
            }
            return Ok(());
        }
        let mut support = Vec::with_capacity(self.nnz());
        self.for_each_nonzero(|k, v| support.push((k, v, x[k].clone())));
        for xi in x.iter_mut() {
            *xi = xi.clone() + gamma.clone() * (S::zero() - xi.clone());
        }
        for (k, a, old) in support {
            x[k] = old.clone() + gamma.clone() * (a - old);
        }
        Ok(())
    }

    /// `x <- x + coeff * atom`.
    pub fn add_scaled_into(&self, x: &mut [S], coeff: &S) {
        self.for_each_nonzero(|k, v| x[k] += coeff.clone() * v);
    }

    /// Euclidean norm squared of the materialized atom, when available
    /// without a square root.
    pub fn norm_sq(&self) -> S {
        match self {
            Atom::Dense(v) => crate::scalar::norm_sq(v),
            Atom::ScaledUnit { coeff, .. } => coeff.clone() * coeff.clone(),
            Atom::SignedSupport { indices, scale, .. } => S::from_usize(indices.len()) * scale.clone() * scale.clone(),
            Atom::Permutation { assignment } => S::from_usize(assignment.len()),
            Atom::RankOne { left, right, scale } => {
                scale.clone() * scale.clone() * crate::scalar::norm_sq(left) * crate::scalar::norm_sq(right)
            }
        }
    }
}

fn negated<S: Scalar>(v: &[S]) -> impl Iterator<Item = S> + '_ {
    v.iter().map(|x| -x.clone())
}

impl<S: Scalar> PartialEq for Atom<S> {
    /// Structural equality. Rank-one atoms also match under a simultaneous
    /// sign flip of both factors.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Atom::Dense(a), Atom::Dense(b)) => a == b,
            (
                Atom::ScaledUnit { dim, index, coeff },
                Atom::ScaledUnit {
                    dim: d2,
                    index: i2,
                    coeff: c2,
                },
            ) => dim == d2 && index == i2 && coeff == c2,
            (
                Atom::SignedSupport {
                    dim,
                    indices,
                    signs,
                    scale,
                },
                Atom::SignedSupport {
                    dim: d2,
                    indices: i2,
                    signs: s2,
                    scale: sc2,
                },
            ) => dim == d2 && indices == i2 && signs == s2 && scale == sc2,
            (Atom::Permutation { assignment }, Atom::Permutation { assignment: a2 }) => assignment == a2,
            (
                Atom::RankOne { left, right, scale },
                Atom::RankOne {
                    left: l2,
                    right: r2,
                    scale: s2,
                },
            ) => {
                scale == s2
                    && left.len() == l2.len()
                    && right.len() == r2.len()
                    && ((left == l2 && right == r2)
                        || (left.iter().cloned().eq(negated(l2)) && right.iter().cloned().eq(negated(r2))))
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub enum StepTarget<S> {
    Atom(Atom<S>),
    Index(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateKind {
    Forward,
    Away,
}

/// Convex decomposition `x = sum_i weights[i] * atoms[i]` with a maintained
/// dense copy of `x`.
#[derive(Debug, Clone)]
pub struct ActiveSet<S> {
    atoms: Vec<Atom<S>>,
    weights: Vec<S>,
    iterate: Vec<S>,
}

/// Weight drift tolerated before floating-point weights are renormalized.
const RENORMALIZE_DRIFT: f64 = 1e-9;

impl<S: Scalar> ActiveSet<S> {
    /// Active set `{atom: 1}`.
    pub fn new(atom: Atom<S>) -> Self {
        let iterate = atom.materialize();
        Self {
            atoms: vec![atom],
            weights: vec![S::one()],
            iterate,
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom<S>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn iterate(&self) -> &[S] {
        &self.iterate
    }

    pub fn into_parts(self) -> (Vec<Atom<S>>, Vec<S>, Vec<S>) {
        (self.atoms, self.weights, self.iterate)
    }

    pub fn weight_sum(&self) -> S {
        crate::scalar::sum(&self.weights)
    }

    pub fn position(&self, atom: &Atom<S>) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// `sum_i weights[i] * atoms[i]` recomputed from scratch.
    pub fn reconstruct(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.iterate.len()];
        for (a, w) in self.atoms.iter().zip(&self.weights) {
            a.add_scaled_into(&mut out, w);
        }
        out
    }

    /// Returns `(away, local_best)`: the active atoms with largest and
    /// smallest inner product against `gradient`. Ties go to the lowest index.
    pub fn select(&self, gradient: &[S]) -> Result<(usize, usize)> {
        let (away, _, best, _) = self.select_with_values(gradient)?;
        Ok((away, best))
    }

    /// Like [`select`](Self::select) but also returns the two inner products.
    pub fn select_with_values(&self, gradient: &[S]) -> Result<(usize, S, usize, S)> {
        if self.atoms.is_empty() {
            return Err(Error::EmptyActiveSet);
        }
        let first = self.atoms[0].inner(gradient)?;
        let (mut away, mut away_val) = (0, first.clone());
        let (mut best, mut best_val) = (0, first);
        for (i, atom) in self.atoms.iter().enumerate().skip(1) {
            let val = atom.inner(gradient)?;
            if val > away_val {
                away = i;
                away_val = val.clone();
            }
            if val < best_val {
                best = i;
                best_val = val;
            }
        }
        Ok((away, away_val, best, best_val))
    }

    /// Largest admissible away step for atom `index`: `a / (1 - a)`.
    /// `None` when the atom carries all the weight (no finite bound).
    pub fn max_away_step(&self, index: usize) -> Result<Option<S>> {
        let w = self.weight(index)?;
        if *w >= S::one() {
            return Ok(None);
        }
        Ok(Some(w.clone() / (S::one() - w.clone())))
    }

    fn weight(&self, index: usize) -> Result<&S> {
        self.weights.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.weights.len(),
        })
    }

    pub fn update(&mut self, target: StepTarget<S>, gamma: S, kind: UpdateKind) -> Result<bool> {
        match (kind, target) {
            (UpdateKind::Forward, t) => self.forward(t, gamma).map(|_| false),
            (UpdateKind::Away, StepTarget::Index(i)) => self.away(i, gamma),
            (UpdateKind::Away, StepTarget::Atom(a)) => {
                let i = self
                    .position(&a)
                    .ok_or(Error::InvalidParameter("away target not in active set".into()))?;
                self.away(i, gamma)
            }
        }
    }

    /// Forward step: all weights scale by `1 - gamma`, then `gamma` is added
    /// to the target (inserted if absent).
    pub fn forward(&mut self, target: StepTarget<S>, gamma: S) -> Result<()> {
        if gamma < S::zero() || gamma > S::one() {
            return Err(Error::InvalidStep {
                gamma: gamma.to_f64(),
                max: 1.0,
            });
        }
        let index = match target {
            StepTarget::Index(i) => {
                self.weight(i)?;
                i
            }
            StepTarget::Atom(atom) => {
                if atom.dim() != self.iterate.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.iterate.len(),
                        found: atom.dim(),
                    });
                }
                match self.position(&atom) {
                    Some(i) => i,
                    None => {
                        self.atoms.push(atom);
                        self.weights.push(S::zero());
                        self.atoms.len() - 1
                    }
                }
            }
        };
        self.atoms[index].blend_into(&mut self.iterate, &gamma)?;
        if gamma == S::one() {
            let atom = self.atoms.swap_remove(index);
            self.atoms = vec![atom];
            self.weights = vec![S::one()];
            return Ok(());
        }
        let keep = S::one() - gamma.clone();
        for w in self.weights.iter_mut() {
            *w = keep.clone() * w.clone();
        }
        self.weights[index] += gamma;
        self.drop_negligible();
        self.renormalize();
        Ok(())
    }

    /// Away step from atom `index`. Returns `true` on a drop step.
    pub fn away(&mut self, index: usize, gamma: S) -> Result<bool> {
        self.weight(index)?;
        let max = self.max_away_step(index)?;
        if gamma < S::zero() {
            return Err(Error::InvalidStep {
                gamma: gamma.to_f64(),
                max: max.map_or(f64::INFINITY, |m| m.to_f64()),
            });
        }
        if let Some(max) = &max {
            if gamma > *max {
                return Err(Error::InvalidStep {
                    gamma: gamma.to_f64(),
                    max: max.to_f64(),
                });
            }
        }
        let atom = &self.atoms[index];
        for (k, xi) in self.iterate.iter_mut().enumerate() {
            let a = atom.entry(k);
            *xi = xi.clone() + gamma.clone() * (xi.clone() - a);
        }
        let grow = S::one() + gamma.clone();
        for w in self.weights.iter_mut() {
            *w = grow.clone() * w.clone();
        }
        let saturated = max.as_ref().is_some_and(|m| gamma == *m);
        if saturated {
            self.weights[index] = S::zero();
        } else {
            self.weights[index] -= gamma;
        }
        let before = self.atoms.len();
        self.drop_negligible();
        self.renormalize();
        Ok(self.atoms.len() < before)
    }

    /// Moves `amount` of weight from atom `from` to atom `to`, updating the
    /// iterate by `amount * (atoms[to] - atoms[from])`. Returns `true` when
    /// `from` is dropped.
    pub fn transfer(&mut self, from: usize, to: usize, amount: S) -> Result<bool> {
        let available = self.weight(from)?.clone();
        self.weight(to)?;
        if amount < S::zero() || amount > available {
            return Err(Error::InvalidStep {
                gamma: amount.to_f64(),
                max: available.to_f64(),
            });
        }
        if from == to {
            return Ok(false);
        }
        let (src, dst) = (&self.atoms[from], &self.atoms[to]);
        for (k, xi) in self.iterate.iter_mut().enumerate() {
            let d = dst.entry(k) - src.entry(k);
            *xi = xi.clone() + amount.clone() * d;
        }
        if amount == available {
            self.weights[from] = S::zero();
        } else {
            self.weights[from] -= amount.clone();
        }
        self.weights[to] += amount;
        let before = self.atoms.len();
        self.drop_negligible();
        Ok(self.atoms.len() < before)
    }

    fn drop_negligible(&mut self) {
        let mut i = 0;
        while i < self.weights.len() {
            if self.weights[i].is_negligible_weight() || self.weights[i] < S::zero() {
                self.weights.remove(i);
                self.atoms.remove(i);
            } else {
                i += 1;
            }
        }
    }

    fn renormalize(&mut self) {
        if S::EXACT {
            return;
        }
        let total = self.weight_sum();
        if (total.to_f64() - 1.0).abs() > RENORMALIZE_DRIFT {
            for w in self.weights.iter_mut() {
                *w = w.clone() / total.clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::{One, Zero};

    fn e(dim: usize, i: usize) -> Atom<f64> {
        Atom::scaled_unit(dim, i, 1.0).unwrap()
    }

    #[test]
    fn inner_scaled_unit() {
        let d = [1.0, -3.0, 2.0];
        assert_eq!(Atom::scaled_unit(3, 1, 2.0).unwrap().inner(&d).unwrap(), -6.0);
    }

    #[test]
    fn inner_rank_one_trace() {
        let d = [3.0, 0.0, 0.0, 1.0];
        let a = Atom::rank_one(vec![1.0, 0.0], vec![1.0, 0.0], -2.0);
        assert_eq!(a.inner(&d).unwrap(), -6.0);
    }

    #[test]
    fn inner_permutation_selects_entries() {
        let d = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let p = Atom::permutation(vec![1, 0, 2]).unwrap();
        assert_eq!(p.inner(&d).unwrap(), 5.0);
    }

    #[test]
    fn inner_dimension_mismatch_errors() {
        let a = e(3, 0);
        assert!(matches!(a.inner(&[1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        assert!(Atom::<f64>::permutation(vec![0, 0, 2]).is_err());
        assert!(Atom::<f64>::permutation(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn signed_support_rejects_unsorted() {
        assert!(Atom::signed_support(4, vec![2, 1], vec![Sign::Plus; 2], 1.0).is_err());
    }

    #[test]
    fn blend_cases() {
        let mut x = vec![1.0, 0.0];
        e(2, 1).blend_into(&mut x, &1.0).unwrap();
        assert_eq!(x, vec![0.0, 1.0]);

        let mut x = vec![1.0, 0.0];
        e(2, 1).blend_into(&mut x, &0.0).unwrap();
        assert_eq!(x, vec![1.0, 0.0]);

        let mut x = vec![1.0, 0.0];
        e(2, 1).blend_into(&mut x, &0.25).unwrap();
        assert_eq!(x, vec![0.75, 0.25]);
    }

    #[test]
    fn blend_rejects_out_of_range_gamma() {
        let mut x = vec![1.0, 0.0];
        assert!(e(2, 1).blend_into(&mut x, &1.5).is_err());
        assert!(e(2, 1).blend_into(&mut x, &-0.1).is_err());
    }

    #[test]
    fn rank_one_equality_up_to_sign_flip() {
        let a = Atom::rank_one(vec![1.0, -2.0], vec![0.5, 3.0], 2.0);
        let b = Atom::rank_one(vec![-1.0, 2.0], vec![-0.5, -3.0], 2.0);
        let c = Atom::rank_one(vec![-1.0, 2.0], vec![0.5, 3.0], 2.0);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn select_two_units() {
        let set = {
            let mut s = ActiveSet::new(e(2, 0));
            s.forward(StepTarget::Atom(e(2, 1)), 0.5).unwrap();
            s
        };
        assert_eq!(set.select(&[2.0, 0.0]).unwrap(), (0, 1));
        assert_eq!(set.select(&[1.0, 1.0]).unwrap(), (0, 0));
    }

    #[test]
    fn select_single_atom() {
        let set = ActiveSet::new(e(3, 2));
        assert_eq!(set.select(&[1.0, -1.0, 4.0]).unwrap(), (0, 0));
    }

    #[test]
    fn forward_then_drop_step() {
        let mut set = ActiveSet::new(e(2, 0));
        set.forward(StepTarget::Atom(e(2, 1)), 0.25).unwrap();
        assert_eq!(set.weights(), &[0.75, 0.25]);
        let max = set.max_away_step(1).unwrap().unwrap();
        assert!((max - 1.0 / 3.0).abs() < 1e-15);
        let dropped = set.away(1, max).unwrap();
        assert!(dropped);
        assert_eq!(set.len(), 1);
        assert_eq!(set.atoms()[0], e(2, 0));
        assert!((set.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_drop_step_with_rationals() {
        let unit = |i| Atom::scaled_unit(2, i, Rational::one()).unwrap();
        let mut set = ActiveSet::new(unit(0));
        set.forward(StepTarget::Atom(unit(1)), Rational::from_ratio(1, 4))
            .unwrap();
        let gamma = Rational::from_ratio(1, 3);
        assert_eq!(set.max_away_step(1).unwrap(), Some(gamma.clone()));
        assert!(set.away(1, gamma).unwrap());
        assert_eq!(set.weights(), &[Rational::one()]);
        assert_eq!(set.iterate(), &[Rational::one(), Rational::zero()]);
    }

    #[test]
    fn away_beyond_max_errors() {
        let mut set = ActiveSet::new(e(2, 0));
        set.forward(StepTarget::Atom(e(2, 1)), 0.25).unwrap();
        assert!(set.away(1, 0.5).is_err());
        assert!(set.away(7, 0.1).is_err());
    }

    #[test]
    fn full_forward_step_collapses() {
        let mut set = ActiveSet::new(e(3, 0));
        set.forward(StepTarget::Atom(e(3, 1)), 0.5).unwrap();
        set.forward(StepTarget::Atom(e(3, 2)), 1.0).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.atoms()[0], e(3, 2));
        assert_eq!(set.iterate(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn duplicate_insertion_merges_weight() {
        let mut set = ActiveSet::new(e(2, 0));
        set.forward(StepTarget::Atom(e(2, 1)), 0.5).unwrap();
        set.forward(StepTarget::Atom(e(2, 1)), 0.5).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn transfer_moves_weight() {
        let mut set = ActiveSet::new(e(2, 0));
        set.forward(StepTarget::Atom(e(2, 1)), 0.5).unwrap();
        assert!(!set.transfer(0, 1, 0.25).unwrap());
        assert_eq!(set.weights(), &[0.25, 0.75]);
        assert_eq!(set.iterate(), &[0.25, 0.75]);
        assert!(set.transfer(0, 1, 0.25).unwrap());
        assert_eq!(set.len(), 1);
    }
}
