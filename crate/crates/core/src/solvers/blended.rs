use super::{check_start, dual_gap, query, stop_reason, Observer, Recorder, RunParams, SolverResult, StepKind};
use crate::atoms::{ActiveSet, Atom, StepTarget};
use crate::error::Result;
use crate::lmo::{cached_query, LinearMinimizationOracle, QuerySource, VertexCache};
use crate::problems::Objective;
use crate::scalar::Scalar;
use crate::steps::{segment_line_search, LineSearchParams};

/// Blended conditional gradients from the vertex `x0`.
///
/// With gap estimate `phi`, an iteration whose active atoms satisfy
/// `<g, a - s> >= phi` (worst `a`, best `s`) moves weight from `a` to `s`
/// by a line search over `[0, alpha_a]`; this never adds an atom. Otherwise
/// a lazy Frank-Wolfe step is attempted through the vertex cache with
/// threshold `phi / k_lazy`, and `phi` is halved when the oracle cannot meet
/// it. Frank-Wolfe steps use the configured step rule.
pub fn blended_cg<S, F, L, O>(
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
    let search = LineSearchParams::default();
    let mut set = ActiveSet::new(x0);
    let mut rule = params.step.clone();
    let mut cache = VertexCache::new(params.cache_capacity);
    let mut grad = vec![S::zero(); n];
    let mut dir = vec![S::zero(); n];
    let mut scratch = Vec::with_capacity(n);
    let mut rec = Recorder::new("bcg", params, observer);
    let mut calls = 0;
    let mut phi: Option<S> = None;
    let mut kind = StepKind::Initial;
    let mut t = 0;
    loop {
        f.gradient(set.iterate(), &mut grad);
        let f_x = f.value(set.iterate());
        let (away, away_val, best, best_val) = set.select_with_values(&grad)?;

        // True gap, when measured at this iterate, and the atom attaining it.
        let mut measured: Option<(Atom<S>, S)> = None;
        if phi.is_none() || t % interval == 0 {
            let v = query(lmo, &grad, &mut calls)?.atom;
            let gap = dual_gap(&grad, set.iterate(), &v)?;
            cache.insert(v.clone());
            measured = Some((v, gap));
        }
        let phi_now = phi
            .get_or_insert_with(|| measured.as_ref().map(|(_, g)| g.clone()).unwrap_or_else(S::zero) / S::from_i64(2))
            .clone();
        let threshold = phi_now.clone() / params.k_lazy.clone();

        let descend = away_val - best_val >= phi_now;
        let mut fw_atom: Option<(Atom<S>, bool)> = None;
        if !descend {
            match &measured {
                Some((v, gap)) if *gap >= threshold => fw_atom = Some((v.clone(), true)),
                Some(_) => {}
                None => {
                    let q = cached_query(&mut cache, lmo, &grad, set.iterate(), &threshold)?;
                    if q.source == QuerySource::Oracle {
                        calls += 1;
                        let meets = q.gap >= threshold;
                        measured = Some((q.atom.clone(), q.gap));
                        if meets {
                            fw_atom = Some((q.atom, true));
                        }
                    } else {
                        fw_atom = Some((q.atom, false));
                    }
                }
            }
        }

        let fw_gap = measured.as_ref().map(|(_, g)| g.clone());
        let row_gap = fw_gap.clone().unwrap_or_else(|| phi_now.clone());
        let gap_met = fw_gap.as_ref().is_some_and(|g| *g <= params.epsilon);
        let control = rec.push(
            t,
            f_x.clone(),
            row_gap,
            calls,
            cache.hits(),
            set.len(),
            kind,
            set.iterate(),
        );
        if let Some(reason) = stop_reason(gap_met, control, t, params) {
            let final_gap = match fw_gap {
                Some(g) => g,
                None => {
                    let v = query(lmo, &grad, &mut calls)?.atom;
                    dual_gap(&grad, set.iterate(), &v)?
                }
            };
            let hits = cache.hits();
            let x = set.iterate().to_vec();
            return Ok(rec.finish(x, Some(set), f_x, final_gap, reason, calls, hits));
        }

        if descend {
            let (src, dst) = (&set.atoms()[away], &set.atoms()[best]);
            for (k, d) in dir.iter_mut().enumerate() {
                *d = dst.entry(k) - src.entry(k);
            }
            let alpha = set.weights()[away].clone();
            let gamma = segment_line_search(f, set.iterate(), &dir, &alpha, &search, &mut scratch);
            let dropped = set.transfer(away, best, gamma)?;
            kind = if dropped { StepKind::Drop } else { StepKind::Descent };
        } else if let Some((v, from_oracle)) = fw_atom {
            v.direction_from(set.iterate(), &mut dir)?;
            let gamma = rule.compute(t, f, &f_x, &grad, set.iterate(), &dir, &S::one(), &mut scratch)?;
            set.forward(StepTarget::Atom(v), gamma)?;
            kind = if from_oracle {
                StepKind::FrankWolfe
            } else {
                StepKind::Lazy
            };
        } else {
            phi = Some(phi_now / S::from_i64(2));
            kind = StepKind::GapUpdate;
        }
        t += 1;
    }
}
