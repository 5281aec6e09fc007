use super::{check_len, LinearMinimizationOracle, OracleAnswer};
use crate::atoms::Atom;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment<S> {
    /// Row `i` is matched to column `columns[i]`.
    pub columns: Vec<usize>,
    pub total_cost: S,
}

/// Minimum-cost perfect matching on a square row-major cost matrix.
///
/// Shortest augmenting paths with row/column potentials, `O(n^3)`.
pub fn hungarian<S: Scalar>(cost: &[S], rows: usize, cols: usize) -> Result<Assignment<S>> {
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    check_len(rows * cols, cost.len())?;
    let n = rows;
    if n == 0 {
        return Ok(Assignment {
            columns: vec![],
            total_cost: S::zero(),
        });
    }
    let at = |i: usize, j: usize| cost[(i - 1) * n + (j - 1)].clone();

    // 1-based; index 0 is the virtual source column.
    let mut u = vec![S::zero(); n + 1];
    let mut v = vec![S::zero(); n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<S>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta: Option<S> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = at(i0, j) - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|m| reduced < *m) {
                    minv[j] = Some(reduced);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| *mj < *d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column always remains");
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta.clone();
                    v[j] -= delta.clone();
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= delta.clone();
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut columns = vec![0usize; n];
    for j in 1..=n {
        columns[row_of[j] - 1] = j - 1;
    }

    #[cfg(debug_assertions)]
    for i in 1..=n {
        for j in 1..=n {
            let lhs = u[i].clone() + v[j].clone();
            let a = at(i, j);
            if S::EXACT {
                debug_assert!(lhs <= a, "dual infeasible at ({i}, {j})");
            } else {
                let (lhs, a) = (lhs.to_f64(), a.to_f64());
                debug_assert!(lhs <= a + 1e-9 * (1.0 + a.abs()), "dual infeasible at ({i}, {j})");
            }
        }
    }

    let mut total_cost = S::zero();
    for (i, &j) in columns.iter().enumerate() {
        total_cost += cost[i * n + j].clone();
    }
    Ok(Assignment { columns, total_cost })
}

/// Permutation matrix minimizing `<d, X>` over doubly stochastic `X`.
pub fn birkhoff_lmo<S: Scalar>(d: &[S], n: usize) -> Result<Atom<S>> {
    let assignment = hungarian(d, n, n)?;
    Ok(Atom::Permutation {
        assignment: assignment.columns,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct BirkhoffPolytope {
    pub n: usize,
}

impl BirkhoffPolytope {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl<S: Scalar> LinearMinimizationOracle<S> for BirkhoffPolytope {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        check_len(self.n * self.n, direction.len())?;
        birkhoff_lmo(direction, self.n).map(OracleAnswer::exact)
    }
}
