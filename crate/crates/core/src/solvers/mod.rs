//! Frank-Wolfe variants.
//!
//! Every solver produces one [`TrajectoryRecord`] per iteration `t`
//! describing the iterate `x_t`: its objective value, the gap measured at
//! `x_t`, cumulative oracle statistics, and the kind of step that produced
//! `x_t` from `x_{t-1}`. A run with `max_iterations = 0` records only the
//! starting point.

mod away;
mod blended;
mod frank_wolfe;
mod stochastic;

pub use away::away_frank_wolfe;
pub use blended::blended_cg;
pub use frank_wolfe::{frank_wolfe, lazified_frank_wolfe};
pub use stochastic::stochastic_fw;

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::atoms::{ActiveSet, Atom};
use crate::error::{Error, Result};
use crate::lmo::{LinearMinimizationOracle, OracleAnswer};
use crate::scalar::{dot, Scalar};
use crate::steps::StepRule;

/// `<gradient, x> - <gradient, v>`.
pub fn dual_gap<S: Scalar>(gradient: &[S], x: &[S], v: &Atom<S>) -> Result<S> {
    Ok(dot(gradient, x) - v.inner(gradient)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Initial,
    FrankWolfe,
    Away,
    /// Away or descent step that removed an atom from the active set.
    Drop,
    /// Weight transfer inside the active set (blended variant).
    Descent,
    /// Step toward a cached or active atom accepted without an oracle call.
    Lazy,
    /// The gap estimate was halved; the iterate did not move.
    GapUpdate,
    Stochastic,
    /// Projected-gradient step of the reference baseline.
    Projection,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Initial => "initial",
            StepKind::FrankWolfe => "frank-wolfe",
            StepKind::Away => "away",
            StepKind::Drop => "drop",
            StepKind::Descent => "descent",
            StepKind::Lazy => "lazy",
            StepKind::GapUpdate => "gap-update",
            StepKind::Stochastic => "stochastic",
            StepKind::Projection => "projection",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    GapMet,
    IterationLimit,
    /// The observer asked the run to stop.
    Stopped,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::GapMet => "gap_met",
            Termination::IterationLimit => "iteration_limit",
            Termination::Stopped => "stopped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<S> {
    pub iteration: usize,
    pub elapsed_seconds: f64,
    pub primal: S,
    /// True Frank-Wolfe gap when an oracle call was made at this iterate;
    /// otherwise the current gap estimate of the lazy variants.
    pub dual_gap: S,
    pub lmo_calls: u64,
    pub cache_hits: u64,
    /// 0 for runs that do not keep a decomposition.
    pub active_set_size: usize,
    pub step_kind: StepKind,
}

#[derive(Debug, Clone)]
pub struct SolverResult<S> {
    pub x: Vec<S>,
    pub active_set: Option<ActiveSet<S>>,
    pub primal: S,
    /// Frank-Wolfe gap at the final iterate. The lazy variants issue one
    /// extra oracle call when needed to certify it; that call is included in
    /// `lmo_calls` but not in the trajectory.
    pub dual_gap: S,
    pub trajectory: Vec<TrajectoryRecord<S>>,
    pub termination: Termination,
    pub lmo_calls: u64,
    pub cache_hits: u64,
    /// Number of steps taken (index of the last record).
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Per-iteration hook. Implemented for `()` (no-op) and for closures
/// `FnMut(&TrajectoryRecord<S>, &[S]) -> Control`.
pub trait Observer<S> {
    fn observe(&mut self, record: &TrajectoryRecord<S>, x: &[S]) -> Control;
}

impl<S> Observer<S> for () {
    fn observe(&mut self, _record: &TrajectoryRecord<S>, _x: &[S]) -> Control {
        Control::Continue
    }
}

impl<S, F: FnMut(&TrajectoryRecord<S>, &[S]) -> Control> Observer<S> for F {
    fn observe(&mut self, record: &TrajectoryRecord<S>, x: &[S]) -> Control {
        self(record, x)
    }
}

#[derive(Debug, Clone)]
pub struct RunParams<S> {
    pub max_iterations: usize,
    /// Target Frank-Wolfe gap.
    pub epsilon: S,
    pub step: StepRule<S>,
    /// Lazy oracle usage in the away-step variant.
    pub lazy: bool,
    /// `None` for an unbounded vertex cache.
    pub cache_capacity: Option<usize>,
    /// Lazy threshold is `phi / k_lazy`.
    pub k_lazy: S,
    pub verbosity: u8,
    pub seed: u64,
    /// Keep a convex decomposition in the vanilla and lazified variants.
    pub track_active_set: bool,
    /// Iterations between true-gap checks in lazy variants; defaults to
    /// `max(1, max_iterations / 100)`.
    pub gap_check_interval: Option<usize>,
}

impl<S: Scalar> Default for RunParams<S> {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            epsilon: S::from_ratio(1, 10_000_000),
            step: StepRule::default(),
            lazy: false,
            cache_capacity: Some(500),
            k_lazy: S::from_i64(2),
            verbosity: 0,
            seed: 0,
            track_active_set: true,
            gap_check_interval: None,
        }
    }
}

impl<S: Scalar> RunParams<S> {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= S::zero() {
            return Err(Error::InvalidParameter("epsilon must be positive".into()));
        }
        if self.k_lazy < S::one() {
            return Err(Error::InvalidParameter("k_lazy must be at least 1".into()));
        }
        if self.cache_capacity == Some(0) {
            return Err(Error::InvalidParameter("cache capacity must be positive".into()));
        }
        Ok(())
    }

    pub fn check_interval(&self) -> usize {
        self.gap_check_interval.unwrap_or(self.max_iterations / 100).max(1)
    }
}

pub(crate) struct Recorder<S, O> {
    name: &'static str,
    start: Instant,
    trajectory: Vec<TrajectoryRecord<S>>,
    observer: O,
    verbosity: u8,
    progress_every: usize,
}

impl<S: Scalar, O: Observer<S>> Recorder<S, O> {
    pub(crate) fn new(name: &'static str, params: &RunParams<S>, observer: O) -> Self {
        Self {
            name,
            start: Instant::now(),
            trajectory: Vec::new(),
            observer,
            verbosity: params.verbosity,
            progress_every: (params.max_iterations / 10).max(1),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn push(
        &mut self,
        iteration: usize,
        primal: S,
        dual_gap: S,
        lmo_calls: u64,
        cache_hits: u64,
        active_set_size: usize,
        step_kind: StepKind,
        x: &[S],
    ) -> Control {
        let record = TrajectoryRecord {
            iteration,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
            primal,
            dual_gap,
            lmo_calls,
            cache_hits,
            active_set_size,
            step_kind,
        };
        if self.verbosity >= 2 || (self.verbosity == 1 && iteration.is_multiple_of(self.progress_every)) {
            eprintln!(
                "{:>6} {:>8} primal={:.6e} gap={:.3e} lmo={} hits={} |S|={}",
                self.name,
                iteration,
                record.primal.to_f64(),
                record.dual_gap.to_f64(),
                lmo_calls,
                cache_hits,
                active_set_size
            );
        }
        let control = self.observer.observe(&record, x);
        self.trajectory.push(record);
        control
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn finish(
        self,
        x: Vec<S>,
        active_set: Option<ActiveSet<S>>,
        primal: S,
        dual_gap: S,
        termination: Termination,
        lmo_calls: u64,
        cache_hits: u64,
    ) -> SolverResult<S> {
        let iterations = self.trajectory.last().map_or(0, |r| r.iteration);
        SolverResult {
            x,
            active_set,
            primal,
            dual_gap,
            trajectory: self.trajectory,
            termination,
            lmo_calls,
            cache_hits,
            iterations,
        }
    }
}

/// Termination decision after recording iteration `t`.
pub(crate) fn stop_reason<S: Scalar>(
    gap_met: bool,
    control: Control,
    t: usize,
    params: &RunParams<S>,
) -> Option<Termination> {
    if gap_met {
        Some(Termination::GapMet)
    } else if control == Control::Stop {
        Some(Termination::Stopped)
    } else if t >= params.max_iterations {
        Some(Termination::IterationLimit)
    } else {
        None
    }
}

pub(crate) fn query<S: Scalar, L: LinearMinimizationOracle<S> + ?Sized>(
    lmo: &L,
    gradient: &[S],
    calls: &mut u64,
) -> Result<OracleAnswer<S>> {
    *calls += 1;
    lmo.extreme_point(gradient)
}

pub(crate) fn check_start<S: Scalar, L: LinearMinimizationOracle<S> + ?Sized>(
    lmo: &L,
    objective_dim: usize,
    x0: &Atom<S>,
) -> Result<()> {
    if lmo.dim() != objective_dim {
        return Err(Error::DimensionMismatch {
            expected: objective_dim,
            found: lmo.dim(),
        });
    }
    if x0.dim() != objective_dim {
        return Err(Error::DimensionMismatch {
            expected: objective_dim,
            found: x0.dim(),
        });
    }
    Ok(())
}

/// Either a bare dense iterate or a maintained decomposition.
pub(crate) enum Iterate<S> {
    Dense(Vec<S>),
    Tracked(ActiveSet<S>),
}

impl<S: Scalar> Iterate<S> {
    pub(crate) fn new(x0: Atom<S>, track: bool) -> Self {
        if track {
            Iterate::Tracked(ActiveSet::new(x0))
        } else {
            Iterate::Dense(x0.materialize())
        }
    }

    pub(crate) fn x(&self) -> &[S] {
        match self {
            Iterate::Dense(x) => x,
            Iterate::Tracked(set) => set.iterate(),
        }
    }

    pub(crate) fn size(&self) -> usize {
        match self {
            Iterate::Dense(_) => 0,
            Iterate::Tracked(set) => set.len(),
        }
    }

    pub(crate) fn step_toward(&mut self, atom: Atom<S>, gamma: S) -> Result<()> {
        match self {
            Iterate::Dense(x) => atom.blend_into(x, &gamma),
            Iterate::Tracked(set) => set.forward(crate::atoms::StepTarget::Atom(atom), gamma),
        }
    }

    pub(crate) fn into_parts(self) -> (Vec<S>, Option<ActiveSet<S>>) {
        match self {
            Iterate::Dense(x) => (x, None),
            Iterate::Tracked(set) => (set.iterate().to_vec(), Some(set)),
        }
    }
}
