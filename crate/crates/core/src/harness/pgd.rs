//! Projected-gradient reference baseline.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lmo::LinearMinimizationOracle;
use crate::problems::Objective;
use crate::scalar::{dot, norm_sq};
use crate::solvers::{dual_gap, stop_reason, Observer, Recorder, RunParams, SolverResult, StepKind};
use crate::steps::StepRule;

/// Euclidean projection onto `{x >= 0, sum x = tau}` by sorting.
pub fn project_simplex(y: &[f64], tau: f64) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        cumulative += uj;
        let candidate = (cumulative - tau) / (j + 1) as f64;
        if uj - candidate > 0.0 {
            theta = candidate;
        }
    }
    y.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// Euclidean projection onto `{||x||_1 <= tau}`.
pub fn project_l1_ball(y: &[f64], tau: f64) -> Vec<f64> {
    if y.iter().map(|v| v.abs()).sum::<f64>() <= tau {
        return y.to_vec();
    }
    let magnitudes: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    project_simplex(&magnitudes, tau)
        .into_iter()
        .zip(y)
        .map(|(w, v)| w.copysign(*v))
        .collect()
}

/// Singular values of a row-major matrix, in decreasing order.
pub fn singular_values(x: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(rows, cols, x);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel_tol * sigma_1`.
pub fn numerical_rank(x: &[f64], rows: usize, cols: usize, rel_tol: f64) -> usize {
    let s = singular_values(x, rows, cols);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|v| **v > rel_tol * top).count()
}

/// Euclidean projection onto the nuclear-norm ball of radius `tau` through a
/// full SVD.
pub fn project_nuclear_ball(x: &[f64], rows: usize, cols: usize, tau: f64) -> Result<Vec<f64>> {
    let m = DMatrix::from_row_slice(rows, cols, x);
    let svd = m.svd(true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Unsupported("singular value decomposition failed".into())),
    };
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let projected = project_l1_ball(&sigma, tau);
    let mut out = vec![0.0; rows * cols];
    for (k, s) in projected.iter().enumerate() {
        if *s == 0.0 {
            continue;
        }
        for i in 0..rows {
            let ui = u[(i, k)] * s;
            for j in 0..cols {
                out[i * cols + j] += ui * v_t[(k, j)];
            }
        }
    }
    Ok(out)
}

/// Projected gradient descent with backtracking on the smoothness estimate.
///
/// A short-step rule in `params.step` fixes the step to `1 / L`; any other
/// rule backtracks from the previous estimate (doubling until the quadratic
/// upper bound holds, then shrinking by 0.9). The recorded dual gap is the
/// Frank-Wolfe gap computed with `lmo`; those oracle calls certify the
/// iterate and are not counted in `lmo_calls`.
pub fn projected_gradient<F, P, L, O>(
    f: &mut F,
    mut project: P,
    lmo: &L,
    x0: Vec<f64>,
    params: &RunParams<f64>,
    observer: O,
) -> Result<SolverResult<f64>>
where
    F: Objective<f64> + ?Sized,
    P: FnMut(&[f64]) -> Result<Vec<f64>>,
    L: LinearMinimizationOracle<f64> + ?Sized,
    O: Observer<f64>,
{
    params.validate()?;
    let n = f.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x0.len(),
        });
    }
    let fixed = match &params.step {
        StepRule::Short { lipschitz, factor } => Some(lipschitz * factor),
        _ => None,
    };
    let mut estimate = fixed.unwrap_or(1.0);
    let mut x = x0;
    let mut grad = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut diff = vec![0.0; n];
    let mut rec = Recorder::new("pgd", params, observer);
    let mut kind = StepKind::Initial;
    let mut t = 0;
    loop {
        f.gradient(&x, &mut grad);
        let f_x = f.value(&x);
        let v = lmo.compute_extreme_point(&grad)?;
        let gap = dual_gap(&grad, &x, &v)?;
        let control = rec.push(t, f_x, gap, 0, 0, 0, kind, &x);
        if let Some(reason) = stop_reason(gap <= params.epsilon, control, t, params) {
            return Ok(rec.finish(x, None, f_x, gap, reason, 0, 0));
        }
        let mut doublings = 0;
        let next = loop {
            for ((ti, xi), gi) in trial.iter_mut().zip(&x).zip(&grad) {
                *ti = xi - gi / estimate;
            }
            let y = project(&trial)?;
            for ((di, yi), xi) in diff.iter_mut().zip(&y).zip(&x) {
                *di = yi - xi;
            }
            let bound = f_x + dot(&grad, &diff) + 0.5 * estimate * norm_sq(&diff);
            if fixed.is_some() || f.value(&y) <= bound {
                break y;
            }
            doublings += 1;
            if doublings > 60 {
                return Err(Error::SmoothnessViolation { doublings });
            }
            estimate *= 2.0;
        };
        if fixed.is_none() {
            estimate *= 0.9;
        }
        x = next;
        kind = StepKind::Projection;
        t += 1;
    }
}
