use super::{
    check_start, dual_gap, query, stop_reason, Iterate, Observer, Recorder, RunParams, SolverResult, StepKind,
};
use crate::atoms::Atom;
use crate::error::Result;
use crate::lmo::{cached_query, LinearMinimizationOracle, QuerySource, VertexCache};
use crate::problems::Objective;
use crate::scalar::Scalar;

/// Vanilla Frank-Wolfe: one oracle call and one step per iteration.
pub fn frank_wolfe<S, F, L, O>(
    f: &mut F,
    lmo: &L,
    x0: Atom<S>,
    params: &RunParams<S>,
    observer: O,
) -> Result<SolverResult<S>>
where
    S: Scalar,
    F: Objective<S> + ?Sized,
    L: LinearMinimizationOracle<S> + ?Sized,
    O: Observer<S>,
{
    params.validate()?;
    check_start(lmo, f.dim(), &x0)?;
    let n = f.dim();
    let mut it = Iterate::new(x0, params.track_active_set);
    let mut rule = params.step.clone();
    let mut grad = vec![S::zero(); n];
    let mut dir = vec![S::zero(); n];
    let mut scratch = Vec::with_capacity(n);
    let mut rec = Recorder::new("fw", params, observer);
    let mut calls = 0;
    let mut kind = StepKind::Initial;
    let mut t = 0;
    loop {
        f.gradient(it.x(), &mut grad);
        let f_x = f.value(it.x());
        let v = query(lmo, &grad, &mut calls)?.atom;
        let gap = dual_gap(&grad, it.x(), &v)?;
        let control = rec.push(t, f_x.clone(), gap.clone(), calls, 0, it.size(), kind, it.x());
        if let Some(reason) = stop_reason(gap <= params.epsilon, control, t, params) {
            let (x, set) = it.into_parts();
            return Ok(rec.finish(x, set, f_x, gap, reason, calls, 0));
        }
        v.direction_from(it.x(), &mut dir)?;
        let gamma = rule.compute(t, f, &f_x, &grad, it.x(), &dir, &S::one(), &mut scratch)?;
        it.step_toward(v, gamma)?;
        kind = StepKind::FrankWolfe;
        t += 1;
    }
}

/// Frank-Wolfe with a weak-separation cache.
///
/// A gap estimate `phi` starts at half the initial gap. Each iteration asks
/// the cache for an atom with `<grad, x - v> >= phi / k_lazy`; on a miss the
/// true oracle answers, and if even that atom falls short, `phi` is halved
/// and the iterate stays put. Every `check_interval()` iterations the true
/// oracle is queried directly to test the stopping criterion. Since halving
/// only follows an oracle answer with gap below `phi / k_lazy`, `phi <=
/// epsilon / 2` implies the measured gap already met `epsilon`.
pub fn lazified_frank_wolfe<S, F, L, O>(
    f: &mut F,
    lmo: &L,
    x0: Atom<S>,
    params: &RunParams<S>,
    observer: O,
) -> Result<SolverResult<S>>
where
    S: Scalar,
    F: Objective<S> + ?Sized,
    L: LinearMinimizationOracle<S> + ?Sized,
    O: Observer<S>,
{
    params.validate()?;
    check_start(lmo, f.dim(), &x0)?;
    let n = f.dim();
    let interval = params.check_interval();
    let mut it = Iterate::new(x0, params.track_active_set);
    let mut rule = params.step.clone();
    let mut cache = VertexCache::new(params.cache_capacity);
    let mut grad = vec![S::zero(); n];
    let mut dir = vec![S::zero(); n];
    let mut scratch = Vec::with_capacity(n);
    let mut rec = Recorder::new("lfw", params, observer);
    let mut calls = 0;
    let mut phi: Option<S> = None;
    let mut kind = StepKind::Initial;
    let mut t = 0;
    loop {
        f.gradient(it.x(), &mut grad);
        let f_x = f.value(it.x());
        let (atom, from_oracle, gap) = match &phi {
            Some(phi) if t % interval != 0 => {
                let threshold = phi.clone() / params.k_lazy.clone();
                let q = cached_query(&mut cache, lmo, &grad, it.x(), &threshold)?;
                let from_oracle = q.source == QuerySource::Oracle;
                if from_oracle {
                    calls += 1;
                }
                (q.atom, from_oracle, q.gap)
            }
            _ => {
                let atom = query(lmo, &grad, &mut calls)?.atom;
                let gap = dual_gap(&grad, it.x(), &atom)?;
                cache.insert(atom.clone());
                (atom, true, gap)
            }
        };
        let phi_now = phi.get_or_insert_with(|| gap.clone() / S::from_i64(2)).clone();
        let row_gap = if from_oracle { gap.clone() } else { phi_now.clone() };
        let gap_met = from_oracle && gap <= params.epsilon;
        let control = rec.push(t, f_x.clone(), row_gap, calls, cache.hits(), it.size(), kind, it.x());
        if let Some(reason) = stop_reason(gap_met, control, t, params) {
            let final_gap = if from_oracle {
                gap
            } else {
                let v = query(lmo, &grad, &mut calls)?.atom;
                dual_gap(&grad, it.x(), &v)?
            };
            let hits = cache.hits();
            let (x, set) = it.into_parts();
            return Ok(rec.finish(x, set, f_x, final_gap, reason, calls, hits));
        }
        let threshold = phi_now.clone() / params.k_lazy.clone();
        if from_oracle && gap < threshold {
            phi = Some(phi_now / S::from_i64(2));
            kind = StepKind::GapUpdate;
        } else {
            atom.direction_from(it.x(), &mut dir)?;
            let gamma = rule.compute(t, f, &f_x, &grad, it.x(), &dir, &S::one(), &mut scratch)?;
            it.step_toward(atom, gamma)?;
            kind = if from_oracle {
                StepKind::FrankWolfe
            } else {
                StepKind::Lazy
            };
        }
        t += 1;
    }
}
