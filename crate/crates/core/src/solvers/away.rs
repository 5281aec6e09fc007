use super::{check_start, dual_gap, query, stop_reason, Observer, Recorder, RunParams, SolverResult, StepKind};
use crate::atoms::{ActiveSet, Atom, StepTarget};
use crate::error::Result;
use crate::lmo::LinearMinimizationOracle;
use crate::problems::Objective;
use crate::scalar::{dot, Scalar};
use crate::steps::StepRule;

enum Move<S> {
    Toward(Atom<S>),
    TowardActive(usize),
    AwayFrom(usize),
}

/// Away-step Frank-Wolfe from the vertex `x0`.
///
/// Each iteration compares the Frank-Wolfe gap `<g, x - v>` with the away
/// gap `<g, a - x>` of the worst active atom `a` and steps along the larger
/// one. Away steps are capped at `alpha_a / (1 - alpha_a)`; a capped step
/// drops `a`. The run stops once the Frank-Wolfe gap is at most `epsilon`.
///
/// With `params.lazy`, the active set serves as the weak-separation cache:
/// the best local Frank-Wolfe or away candidate is used whenever its gap
/// reaches `phi / k_lazy`, and the oracle is consulted only otherwise (plus
/// every `check_interval()` iterations to test the stopping criterion).
pub fn away_frank_wolfe<S, F, L, O>(
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
    let mut set = ActiveSet::new(x0);
    let mut rule = params.step.clone();
    let mut grad = vec![S::zero(); n];
    let mut dir = vec![S::zero(); n];
    let mut scratch = Vec::with_capacity(n);
    let mut rec = Recorder::new(if params.lazy { "lafw" } else { "afw" }, params, observer);
    let mut calls = 0;
    let mut hits = 0;
    let mut phi: Option<S> = None;
    let mut kind = StepKind::Initial;
    let mut t = 0;
    loop {
        f.gradient(set.iterate(), &mut grad);
        let f_x = f.value(set.iterate());
        let gx = dot(&grad, set.iterate());
        let (away, away_val, best, best_val) = set.select_with_values(&grad)?;
        let away_gap = away_val - gx.clone();
        let local_gap = gx.clone() - best_val;

        let consult = !params.lazy || phi.is_none() || t % interval == 0;
        let oracle = if consult {
            let v = query(lmo, &grad, &mut calls)?.atom;
            let gap = dual_gap(&grad, set.iterate(), &v)?;
            Some((v, gap))
        } else {
            None
        };

        let mut planned: Option<Move<S>> = None;
        let mut halve = false;
        if params.lazy {
            let phi_now = phi
                .get_or_insert_with(|| oracle.as_ref().map(|(_, g)| g.clone()).unwrap_or_else(S::zero) / S::from_i64(2))
                .clone();
            let threshold = phi_now / params.k_lazy.clone();
            if local_gap >= threshold || away_gap >= threshold {
                hits += 1;
                planned = Some(if local_gap >= away_gap {
                    Move::TowardActive(best)
                } else {
                    Move::AwayFrom(away)
                });
            }
        }
        let mut oracle = oracle;
        if params.lazy && planned.is_none() && oracle.is_none() {
            let v = query(lmo, &grad, &mut calls)?.atom;
            let gap = dual_gap(&grad, set.iterate(), &v)?;
            oracle = Some((v, gap));
        }

        let fw_gap = oracle.as_ref().map(|(_, g)| g.clone());
        let row_gap = match (&fw_gap, &phi) {
            (Some(g), _) => g.clone(),
            (None, Some(p)) => p.clone(),
            (None, None) => S::zero(),
        };
        let gap_met = fw_gap.as_ref().is_some_and(|g| *g <= params.epsilon);
        let control = rec.push(t, f_x.clone(), row_gap, calls, hits, set.len(), kind, set.iterate());
        if let Some(reason) = stop_reason(gap_met, control, t, params) {
            let final_gap = match fw_gap {
                Some(g) => g,
                None => {
                    let v = query(lmo, &grad, &mut calls)?.atom;
                    dual_gap(&grad, set.iterate(), &v)?
                }
            };
            let x = set.iterate().to_vec();
            return Ok(rec.finish(x, Some(set), f_x, final_gap, reason, calls, hits));
        }

        if planned.is_none() {
            let (v, g_fw) = oracle.expect("oracle consulted when no lazy candidate");
            if params.lazy {
                let phi_now = phi.clone().expect("phi initialized");
                if g_fw < phi_now.clone() / params.k_lazy.clone() {
                    halve = true;
                }
            }
            if !halve {
                let can_away = set.max_away_step(away)?.is_some();
                planned = Some(if g_fw >= away_gap || !can_away {
                    Move::Toward(v)
                } else {
                    Move::AwayFrom(away)
                });
            }
        }

        if halve {
            phi = phi.map(|p| p / S::from_i64(2));
            kind = StepKind::GapUpdate;
        } else {
            let lazy_move = params.lazy && fw_gap.is_none();
            kind = apply_move(
                planned.expect("move planned"),
                &mut set,
                &mut rule,
                t,
                f,
                &f_x,
                &grad,
                &mut dir,
                &mut scratch,
            )?;
            if lazy_move && kind == StepKind::FrankWolfe {
                kind = StepKind::Lazy;
            }
        }
        t += 1;
    }
}

#[allow(clippy::too_many_arguments)]
fn apply_move<S: Scalar, F: Objective<S> + ?Sized>(
    mv: Move<S>,
    set: &mut ActiveSet<S>,
    rule: &mut StepRule<S>,
    t: usize,
    f: &mut F,
    f_x: &S,
    grad: &[S],
    dir: &mut [S],
    scratch: &mut Vec<S>,
) -> Result<StepKind> {
    match mv {
        Move::Toward(v) => {
            v.direction_from(set.iterate(), dir)?;
            let gamma = rule.compute(t, f, f_x, grad, set.iterate(), dir, &S::one(), scratch)?;
            set.forward(StepTarget::Atom(v), gamma)?;
            Ok(StepKind::FrankWolfe)
        }
        Move::TowardActive(i) => {
            set.atoms()[i].direction_from(set.iterate(), dir)?;
            let gamma = rule.compute(t, f, f_x, grad, set.iterate(), dir, &S::one(), scratch)?;
            set.forward(StepTarget::Index(i), gamma)?;
            Ok(StepKind::FrankWolfe)
        }
        Move::AwayFrom(a) => {
            let gamma_max = match set.max_away_step(a)? {
                Some(m) => m,
                None => return Ok(StepKind::Away),
            };
            set.atoms()[a].direction_from(set.iterate(), dir)?;
            for d in dir.iter_mut() {
                *d = -d.clone();
            }
            let gamma = rule.compute(t, f, f_x, grad, set.iterate(), dir, &gamma_max, scratch)?;
            let dropped = set.away(a, gamma)?;
            Ok(if dropped { StepKind::Drop } else { StepKind::Away })
        }
    }
}
