//! Vertex cache implementing a weak separation oracle on top of an exact one.

use std::collections::VecDeque;

use super::{LinearMinimizationOracle, OracleStatus};
use crate::atoms::Atom;
use crate::error::Result;
use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuerySource {
    Cache,
    Oracle,
}

#[derive(Debug, Clone)]
pub struct CacheAnswer<S> {
    pub atom: Atom<S>,
    pub source: QuerySource,
    /// `<gradient, x - atom>` for the returned atom.
    pub gap: S,
    pub status: OracleStatus,
}

/// Atoms previously returned by an oracle, oldest first.
#[derive(Debug, Clone)]
pub struct VertexCache<S> {
    entries: VecDeque<Atom<S>>,
    capacity: Option<usize>,
    hits: u64,
    misses: u64,
    evictions: u64,
}

impl<S: Scalar> VertexCache<S> {
    /// `capacity = None` means unbounded.
    pub fn new(capacity: Option<usize>) -> Self {
        Self {
            entries: VecDeque::new(),
            capacity,
            hits: 0,
            misses: 0,
            evictions: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn evictions(&self) -> u64 {
        self.evictions
    }

    pub fn entries(&self) -> impl Iterator<Item = &Atom<S>> {
        self.entries.iter()
    }

    /// Inserts unless an equal atom is already cached; evicts the oldest
    /// entry when full.
    pub fn insert(&mut self, atom: Atom<S>) {
        if self.capacity == Some(0) || self.entries.contains(&atom) {
            return;
        }
        if let Some(cap) = self.capacity {
            while self.entries.len() >= cap {
                self.entries.pop_front();
                self.evictions += 1;
            }
        }
        self.entries.push_back(atom);
    }

    /// First cached atom with `<gradient, x - v> >= threshold`, in insertion
    /// order.
    pub fn lookup(&self, gradient: &[S], x: &[S], threshold: &S) -> Result<Option<(Atom<S>, S)>> {
        let gx = dot(gradient, x);
        for atom in &self.entries {
            let gap = gx.clone() - atom.inner(gradient)?;
            if gap >= *threshold {
                return Ok(Some((atom.clone(), gap)));
            }
        }
        Ok(None)
    }
}

/// Weak separation query: a cached atom guaranteeing progress `threshold`,
/// or else the exact oracle answer (which is then cached).
pub fn cached_query<S, L>(
    cache: &mut VertexCache<S>,
    wrapped: &L,
    gradient: &[S],
    x: &[S],
    threshold: &S,
) -> Result<CacheAnswer<S>>
where
    S: Scalar,
    L: LinearMinimizationOracle<S> + ?Sized,
{
    if let Some((atom, gap)) = cache.lookup(gradient, x, threshold)? {
        cache.hits += 1;
        return Ok(CacheAnswer {
            atom,
            source: QuerySource::Cache,
            gap,
            status: OracleStatus::Exact,
        });
    }
    cache.misses += 1;
    let answer = wrapped.extreme_point(gradient)?;
    let gap = dot(gradient, x) - answer.atom.inner(gradient)?;
    cache.insert(answer.atom.clone());
    Ok(CacheAnswer {
        atom: answer.atom,
        source: QuerySource::Oracle,
        gap,
        status: answer.status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmo::ProbabilitySimplex;

    fn e(i: usize) -> Atom<f64> {
        Atom::scaled_unit(2, i, 1.0).unwrap()
    }

    #[test]
    fn hit_returns_first_satisfying() {
        let mut cache = VertexCache::new(None);
        cache.insert(e(0));
        cache.insert(e(1));
        let lmo = ProbabilitySimplex::new(2, 1.0);
        let ans = cached_query(&mut cache, &lmo, &[1.0, 0.0], &[0.5, 0.5], &0.4).unwrap();
        assert_eq!(ans.source, QuerySource::Cache);
        assert_eq!(ans.atom, e(1));
        assert_eq!(ans.gap, 0.5);
        assert_eq!((cache.hits(), cache.misses()), (1, 0));
    }

    #[test]
    fn empty_cache_calls_oracle() {
        let mut cache = VertexCache::new(None);
        let lmo = ProbabilitySimplex::new(2, 1.0);
        let ans = cached_query(&mut cache, &lmo, &[1.0, 0.0], &[0.5, 0.5], &0.0).unwrap();
        assert_eq!(ans.source, QuerySource::Oracle);
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn bounded_cache_evicts_oldest() {
        let mut cache = VertexCache::new(Some(1));
        let lmo = ProbabilitySimplex::new(2, 1.0);
        let x = [0.5, 0.5];
        cached_query(&mut cache, &lmo, &[1.0, 0.0], &x, &10.0).unwrap();
        cached_query(&mut cache, &lmo, &[0.0, 1.0], &x, &10.0).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.evictions(), 1);
        assert_eq!(cache.entries().next().unwrap(), &e(0));
    }
}
