//! Nuclear-norm ball oracle via power iteration on `D^T D`.

use super::{check_len, LinearMinimizationOracle, OracleAnswer, OracleStatus};
use crate::atoms::Atom;
use crate::error::{Error, Result};

/// Power-iteration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_iter: 500,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularPair {
    pub sigma: f64,
    /// Left singular vector, length `rows`.
    pub u: Vec<f64>,
    /// Right singular vector, length `cols`.
    pub v: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// 64-bit LCG (Knuth MMIX constants) producing values in `[-1, 1)`.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn mat_vec(d: &[f64], rows: usize, cols: usize, v: &[f64], out: &mut [f64]) {
    for i in 0..rows {
        let row = &d[i * cols..(i + 1) * cols];
        out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

fn mat_t_vec(d: &[f64], rows: usize, cols: usize, u: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for i in 0..rows {
        let row = &d[i * cols..(i + 1) * cols];
        for (o, a) in out.iter_mut().zip(row) {
            *o += a * u[i];
        }
    }
}

/// Leading singular triple of a row-major `rows x cols` matrix.
///
/// Converged when `||D^T u - sigma v|| <= tol * sigma`; the returned pair
/// also satisfies `D v = sigma u` by construction.
pub fn top_singular_pair(d: &[f64], rows: usize, cols: usize, params: PowerIteration) -> Result<SingularPair> {
    check_len(rows * cols, d.len())?;
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyDirection);
    }
    let mut rng = Lcg(params.seed);
    let mut v: Vec<f64> = (0..cols).map(|_| rng.next()).collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x /= n0);
    let mut u = vec![0.0; rows];
    let mut w = vec![0.0; cols];

    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        mat_vec(d, rows, cols, &v, &mut u);
        let s = norm(&u);
        if s == 0.0 {
            break;
        }
        u.iter_mut().for_each(|x| *x /= s);
        mat_t_vec(d, rows, cols, &u, &mut w);
        let sigma = norm(&w);
        if sigma == 0.0 {
            break;
        }
        let residual = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - sigma * b).powi(2))
            .sum::<f64>()
            .sqrt();
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / sigma;
        }
        if residual <= params.tol * sigma {
            converged = true;
            break;
        }
    }

    mat_vec(d, rows, cols, &v, &mut u);
    let sigma = norm(&u);
    if sigma == 0.0 {
        // zero matrix: any unit pair is a singular pair
        let mut u0 = vec![0.0; rows];
        u0[0] = 1.0;
        let mut v0 = vec![0.0; cols];
        v0[0] = 1.0;
        return Ok(SingularPair {
            sigma: 0.0,
            u: u0,
            v: v0,
            converged: true,
            iterations,
        });
    }
    u.iter_mut().for_each(|x| *x /= sigma);
    Ok(SingularPair {
        sigma,
        u,
        v,
        converged,
        iterations,
    })
}

/// `-tau * u v^T` for the leading singular pair of `d`.
pub fn nuclear_norm_lmo(
    d: &[f64],
    rows: usize,
    cols: usize,
    tau: f64,
    params: PowerIteration,
) -> Result<OracleAnswer<f64>> {
    check_len(rows * cols, d.len())?;
    if tau == 0.0 {
        let mut left = vec![0.0; rows];
        left[0] = 1.0;
        let mut right = vec![0.0; cols];
        right[0] = 1.0;
        return Ok(OracleAnswer::exact(Atom::rank_one(left, right, 0.0)));
    }
    let pair = top_singular_pair(d, rows, cols, params)?;
    let status = if pair.converged {
        OracleStatus::Exact
    } else {
        OracleStatus::NotConverged
    };
    Ok(OracleAnswer {
        atom: Atom::rank_one(pair.u, pair.v, -tau),
        status,
    })
}

#[derive(Debug, Clone)]
pub struct NuclearNormBall {
    pub rows: usize,
    pub cols: usize,
    pub radius: f64,
    pub power: PowerIteration,
}

impl NuclearNormBall {
    pub fn new(rows: usize, cols: usize, radius: f64) -> Self {
        Self {
            rows,
            cols,
            radius,
            power: PowerIteration::default(),
        }
    }
}

impl LinearMinimizationOracle<f64> for NuclearNormBall {
    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    fn extreme_point(&self, direction: &[f64]) -> Result<OracleAnswer<f64>> {
        nuclear_norm_lmo(direction, self.rows, self.cols, self.radius, self.power)
    }
}
