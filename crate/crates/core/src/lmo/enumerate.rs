use super::{check_len, LinearMinimizationOracle, OracleAnswer};
use crate::atoms::{Atom, Sign};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Brute-force oracle over an explicit vertex list.
///
/// Scans every vertex and keeps the first one attaining the minimum. Useful
/// as a reference implementation for small regions.
#[derive(Debug, Clone)]
pub struct EnumeratedVertices<S> {
    dim: usize,
    vertices: Vec<Atom<S>>,
}

impl<S: Scalar> EnumeratedVertices<S> {
    pub fn new(vertices: Vec<Atom<S>>) -> Result<Self> {
        let dim = vertices.first().ok_or(Error::EmptyDirection)?.dim();
        if let Some(bad) = vertices.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, vertices })
    }

    pub fn vertices(&self) -> &[Atom<S>] {
        &self.vertices
    }

    /// `radius * e_i` for every coordinate.
    pub fn simplex(dim: usize, radius: S) -> Result<Self> {
        let vertices = (0..dim)
            .map(|i| Atom::scaled_unit(dim, i, radius.clone()))
            .collect::<Result<_>>()?;
        Self::new(vertices)
    }

    /// `±radius * e_i`.
    pub fn l1_ball(dim: usize, radius: S) -> Result<Self> {
        let mut vertices = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            vertices.push(Atom::scaled_unit(dim, i, radius.clone())?);
            vertices.push(Atom::scaled_unit(dim, i, -radius.clone())?);
        }
        Self::new(vertices)
    }

    /// All `2^dim` sign patterns scaled by `radius`.
    pub fn linf_ball(dim: usize, radius: S) -> Result<Self> {
        if dim > 20 {
            return Err(Error::InvalidParameter("dimension too large to enumerate".into()));
        }
        let vertices = (0..1u64 << dim)
            .map(|mask| {
                Atom::Dense(
                    (0..dim)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                -radius.clone()
                            } else {
                                radius.clone()
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        Self::new(vertices)
    }

    /// Every signed `k`-support scaled by `radius`.
    pub fn ksparse(dim: usize, k: usize, radius: S) -> Result<Self> {
        if k == 0 || k > dim || dim > 16 {
            return Err(Error::SparsityTooLarge { k, dim });
        }
        let mut vertices = Vec::new();
        for mask in 0..1u32 << dim {
            if mask.count_ones() as usize != k {
                continue;
            }
            let support: Vec<usize> = (0..dim).filter(|i| mask >> i & 1 == 1).collect();
            for signs in 0..1u32 << k {
                let s = (0..k)
                    .map(|b| if signs >> b & 1 == 1 { Sign::Minus } else { Sign::Plus })
                    .collect();
                vertices.push(Atom::signed_support(dim, support.clone(), s, radius.clone())?);
            }
        }
        Self::new(vertices)
    }

    /// All `n!` permutation matrices.
    pub fn birkhoff(n: usize) -> Result<Self> {
        if n == 0 || n > 8 {
            return Err(Error::InvalidParameter("n must be in 1..=8 to enumerate".into()));
        }
        let mut perms = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        permutations(&mut current, 0, &mut perms);
        perms.sort();
        Self::new(
            perms
                .into_iter()
                .map(|assignment| Atom::Permutation { assignment })
                .collect(),
        )
    }
}

fn permutations(current: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == current.len() {
        out.push(current.clone());
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        permutations(current, k + 1, out);
        current.swap(k, i);
    }
}

impl<S: Scalar> LinearMinimizationOracle<S> for EnumeratedVertices<S> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        check_len(self.dim, direction.len())?;
        let mut best: Option<(usize, S)> = None;
        for (i, v) in self.vertices.iter().enumerate() {
            let val = v.inner(direction)?;
            if best.as_ref().is_none_or(|(_, b)| val < *b) {
                best = Some((i, val));
            }
        }
        let (i, _) = best.expect("non-empty by construction");
        Ok(OracleAnswer::exact(self.vertices[i].clone()))
    }
}
