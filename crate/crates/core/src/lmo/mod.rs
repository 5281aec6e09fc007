//! Linear minimization oracles.
//!
//! An oracle maps a direction `d` to an extreme point `v` of its feasible
//! region attaining `min_{x in C} <d, x>`. Custom regions plug in by
//! implementing [`LinearMinimizationOracle`].

mod assignment;
mod cache;
mod enumerate;
mod nuclear;
mod polytopes;

pub use assignment::{birkhoff_lmo, hungarian, Assignment, BirkhoffPolytope};
pub use cache::{cached_query, CacheAnswer, QuerySource, VertexCache};
pub use enumerate::EnumeratedVertices;
pub use nuclear::{nuclear_norm_lmo, top_singular_pair, NuclearNormBall, PowerIteration, SingularPair};
pub use polytopes::{
    ksparse_lmo, lp_ball_lmo, probability_simplex_lmo, KSparsePolytope, L1Ball, L2Ball, LInfBall, LpNorm,
    ProbabilitySimplex,
};

use crate::atoms::Atom;
use crate::error::Result;
use crate::scalar::Scalar;

/// Side information attached to an oracle answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Exact,
    /// The direction was zero; any feasible point is optimal.
    DegenerateDirection,
    /// An iterative subroutine hit its iteration cap.
    NotConverged,
}

#[derive(Debug, Clone)]
pub struct OracleAnswer<S> {
    pub atom: Atom<S>,
    pub status: OracleStatus,
}

impl<S> OracleAnswer<S> {
    pub fn exact(atom: Atom<S>) -> Self {
        Self {
            atom,
            status: OracleStatus::Exact,
        }
    }
}

pub trait LinearMinimizationOracle<S: Scalar> {
    /// Dimension of the flattened ambient space.
    fn dim(&self) -> usize;

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>>;

    fn compute_extreme_point(&self, direction: &[S]) -> Result<Atom<S>> {
        self.extreme_point(direction).map(|a| a.atom)
    }
}

impl<S: Scalar, T: LinearMinimizationOracle<S> + ?Sized> LinearMinimizationOracle<S> for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        (**self).extreme_point(direction)
    }
}

impl<S: Scalar, T: LinearMinimizationOracle<S> + ?Sized> LinearMinimizationOracle<S> for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        (**self).extreme_point(direction)
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(crate::error::Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
