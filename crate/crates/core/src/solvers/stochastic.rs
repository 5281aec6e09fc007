use super::{check_start, dual_gap, query, stop_reason, Observer, Recorder, RunParams, SolverResult, StepKind};
use crate::atoms::Atom;
use crate::error::{Error, Result};
use crate::lmo::LinearMinimizationOracle;
use crate::problems::StochasticOracle;
use crate::scalar::norm_sq;
use crate::steps::{agnostic_step, short_step_scaled, StepRule};

/// Stochastic Frank-Wolfe with batch-size and momentum schedules.
///
/// At iteration `t`, `batch(t)` samples are averaged into `g_t` and the
/// momentum estimate becomes `m_t = (1 - rho_t) m_{t-1} + rho_t g_t` with
/// `rho_0 = 1`. The oracle is queried with `m_t`; the recorded gap is
/// `<m_t, x_t - v_t>` and the recorded primal is the full objective when the
/// oracle provides it (`NaN` otherwise). Only the agnostic and short-step
/// rules apply; `params.step` set to the adaptive default is treated as
/// agnostic.
pub fn stochastic_fw<Q, L, B, M, O>(
    oracle: &mut Q,
    lmo: &L,
    x0: Atom<f64>,
    mut batch: B,
    mut momentum: M,
    params: &RunParams<f64>,
    observer: O,
) -> Result<SolverResult<f64>>
where
    Q: StochasticOracle + ?Sized,
    L: LinearMinimizationOracle<f64> + ?Sized,
    B: FnMut(usize) -> usize,
    M: FnMut(usize) -> f64,
    O: Observer<f64>,
{
    params.validate()?;
    check_start(lmo, oracle.dim(), &x0)?;
    let n = oracle.dim();
    let mut x = x0.materialize();
    let mut m = vec![0.0; n];
    let mut sample = vec![0.0; n];
    let mut dir = vec![0.0; n];
    let mut rec = Recorder::new("sfw", params, observer);
    let mut calls = 0;
    let mut kind = StepKind::Initial;
    let mut t = 0;
    loop {
        let b = batch(t);
        if b == 0 {
            return Err(Error::ZeroBatch);
        }
        oracle.sample_gradient(&x, b, &mut sample)?;
        let rho = if t == 0 { 1.0 } else { momentum(t) };
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("momentum {rho} outside [0, 1]")));
        }
        if rho == 1.0 {
            m.copy_from_slice(&sample);
        } else {
            for (mi, gi) in m.iter_mut().zip(&sample) {
                *mi = (1.0 - rho) * *mi + rho * gi;
            }
        }
        let v = query(lmo, &m, &mut calls)?.atom;
        let gap = dual_gap(&m, &x, &v)?;
        let primal = oracle.full_value(&x).unwrap_or(f64::NAN);
        let control = rec.push(t, primal, gap, calls, 0, 0, kind, &x);
        if let Some(reason) = stop_reason(gap <= params.epsilon, control, t, params) {
            return Ok(rec.finish(x, None, primal, gap, reason, calls, 0));
        }
        let gamma = match &params.step {
            StepRule::Agnostic | StepRule::Adaptive { .. } => agnostic_step::<f64>(t).min(1.0),
            StepRule::Short { lipschitz, factor } => {
                v.direction_from(&x, &mut dir)?;
                short_step_scaled(&gap, &norm_sq(&dir), lipschitz, factor, &1.0)
            }
            StepRule::LineSearch(_) => {
                return Err(Error::Unsupported("line search needs exact function values".into()));
            }
        };
        v.blend_into(&mut x, &gamma)?;
        kind = StepKind::Stochastic;
        t += 1;
    }
}
