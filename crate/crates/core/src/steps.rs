//! Step-size rules.
//!
//! All rules are generic over [`Scalar`]: the agnostic and short-step rules
//! only use field operations, so they stay exact over rationals. The adaptive
//! rule and the segment line search evaluate the objective at trial points
//! `x + gamma * d`, computed coordinate-wise exactly as the solvers update
//! their iterates, so an accepted decrease carries over bit for bit.

use crate::error::{Error, Result};
use crate::problems::Objective;
use crate::scalar::{dot, norm_sq, Rational, Scalar};

fn half<S: Scalar>() -> S {
    S::from_ratio(1, 2)
}

/// `2 / (2 + t)`.
pub fn agnostic_step<S: Scalar>(t: usize) -> S {
    S::from_i64(2) / S::from_usize(t + 2)
}

/// `clamp(gap / (L * ||x - v||^2), 0, gamma_max)`; zero for a stationary
/// direction.
pub fn short_step<S: Scalar>(gap: &S, diff_norm_sq: &S, lipschitz: &S, gamma_max: &S) -> S {
    short_step_scaled(gap, diff_norm_sq, lipschitz, &S::one(), gamma_max)
}

/// Short step with denominator `factor * L * ||x - v||^2`. `factor = 2`
/// reproduces the alternative convention with a doubled denominator.
pub fn short_step_scaled<S: Scalar>(gap: &S, diff_norm_sq: &S, lipschitz: &S, factor: &S, gamma_max: &S) -> S {
    if *diff_norm_sq <= S::zero() || *gap <= S::zero() {
        return S::zero();
    }
    let raw = gap.clone() / (factor.clone() * lipschitz.clone() * diff_norm_sq.clone());
    raw.clamp_to(S::zero(), gamma_max.clone())
}

/// Exact short step over rationals.
pub fn rational_short_step(
    gap: &Rational,
    diff_norm_sq: &Rational,
    lipschitz: &Rational,
    gamma_max: &Rational,
) -> Rational {
    short_step(gap, diff_norm_sq, lipschitz, gamma_max)
}

/// Constants of the adaptive (Lipschitz-estimating) rule.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveParams<S> {
    /// Growth factor applied while the decrease condition fails.
    pub grow: S,
    /// Shrink factor applied to the accepted estimate for the next call.
    pub shrink: S,
    pub max_doublings: usize,
}

impl<S: Scalar> Default for AdaptiveParams<S> {
    fn default() -> Self {
        Self {
            grow: S::from_i64(2),
            shrink: S::from_ratio(9, 10),
            max_doublings: 60,
        }
    }
}

fn trial_point<S: Scalar>(x: &[S], d: &[S], gamma: &S, out: &mut Vec<S>) {
    out.clear();
    out.extend(x.iter().zip(d).map(|(xi, di)| xi.clone() + gamma.clone() * di.clone()));
}

/// One backtracking pass of the adaptive rule.
///
/// Returns `(gamma, next_estimate)`: `gamma` satisfies
/// `f(x + gamma d) <= f(x) + gamma <g, d> + M gamma^2 ||d||^2 / 2` for the
/// accepted `M = m_in * grow^k`, and the returned estimate is `shrink * M`.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_step<S: Scalar, F: Objective<S> + ?Sized>(
    f: &mut F,
    f_x: &S,
    grad_at_x: &[S],
    x: &[S],
    d: &[S],
    gamma_max: &S,
    m_in: &S,
    params: &AdaptiveParams<S>,
    scratch: &mut Vec<S>,
) -> Result<(S, S)> {
    if *m_in <= S::zero() {
        return Err(Error::InvalidParameter("Lipschitz estimate must be positive".into()));
    }
    let slope = dot(grad_at_x, d);
    let dn = norm_sq(d);
    if *gamma_max <= S::zero() || dn <= S::zero() || slope >= S::zero() {
        return Ok((S::zero(), params.shrink.clone() * m_in.clone()));
    }
    let mut m = m_in.clone();
    for _ in 0..=params.max_doublings {
        let gamma = (-slope.clone() / (m.clone() * dn.clone())).clamp_to(S::zero(), gamma_max.clone());
        trial_point(x, d, &gamma, scratch);
        let lhs = f.value(scratch);
        let rhs = f_x.clone()
            + gamma.clone() * slope.clone()
            + half::<S>() * m.clone() * gamma.clone() * gamma.clone() * dn.clone();
        if lhs <= rhs {
            return Ok((gamma, params.shrink.clone() * m));
        }
        m *= params.grow.clone();
    }
    Err(Error::SmoothnessViolation {
        doublings: params.max_doublings,
    })
}

/// Initial smoothness estimate from one finite-difference probe of the
/// gradient along `d`: `<grad(x + h d) - grad(x), d> / (h ||d||^2)`.
pub fn probe_lipschitz<S: Scalar, F: Objective<S> + ?Sized>(
    f: &mut F,
    grad_at_x: &[S],
    x: &[S],
    d: &[S],
    gamma_max: &S,
) -> S {
    let dn = norm_sq(d);
    if dn <= S::zero() {
        return S::one();
    }
    let mut h = S::from_ratio(1, 1000);
    if *gamma_max > S::zero() && *gamma_max < h {
        h = gamma_max.clone();
    }
    let mut probe = Vec::with_capacity(x.len());
    trial_point(x, d, &h, &mut probe);
    let mut g2 = vec![S::zero(); x.len()];
    f.gradient(&probe, &mut g2);
    let mut curv = S::zero();
    for ((a, b), di) in g2.iter().zip(grad_at_x).zip(d) {
        curv += (a.clone() - b.clone()) * di.clone();
    }
    let m0 = curv / (h * dn);
    if m0 > S::zero() {
        m0
    } else {
        S::one()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchParams<S> {
    /// Bracket width, relative to `gamma_hi`, at which the search stops.
    pub tol: S,
    pub max_probes: usize,
}

impl<S: Scalar> Default for LineSearchParams<S> {
    fn default() -> Self {
        Self {
            tol: S::from_ratio(1, 100_000_000),
            max_probes: 64,
        }
    }
}

/// Golden-section search for `argmin_{gamma in [0, gamma_hi]} f(x + gamma d)`.
///
/// Both endpoints are probed, so boundary minimizers are returned exactly.
/// The final bracket is refined by one secant step on the directional
/// derivative `<grad f(x + gamma d), d>`, kept only if its value does not
/// exceed the best golden-section point. Derivatives stay informative after
/// function values stop resolving differences, and on quadratics the secant
/// step is the exact minimizer.
pub fn segment_line_search<S: Scalar, F: Objective<S> + ?Sized>(
    f: &mut F,
    x: &[S],
    d: &[S],
    gamma_hi: &S,
    params: &LineSearchParams<S>,
    scratch: &mut Vec<S>,
) -> S {
    if *gamma_hi <= S::zero() || d.iter().all(|v| v.is_zero()) {
        return S::zero();
    }
    let ratio = S::from_ratio(6_180_339_887_498_949, 10_000_000_000_000_000);
    let mut eval = |g: &S, scratch: &mut Vec<S>| {
        trial_point(x, d, g, scratch);
        f.value(scratch)
    };
    let width_tol = params.tol.clone() * gamma_hi.clone();
    let budget = params.max_probes.max(5);

    let f_lo = eval(&S::zero(), scratch);
    let f_hi = eval(gamma_hi, scratch);
    let (mut a, mut b) = (S::zero(), gamma_hi.clone());
    let mut c = b.clone() - ratio.clone() * (b.clone() - a.clone());
    let mut e = a.clone() + ratio.clone() * (b.clone() - a.clone());
    let mut fc = eval(&c, scratch);
    let mut fe = eval(&e, scratch);
    let mut probes = 4;
    while probes + 1 < budget && b.clone() - a.clone() > width_tol {
        if fc <= fe {
            b = e;
            e = c;
            fe = fc;
            c = b.clone() - ratio.clone() * (b.clone() - a.clone());
            fc = eval(&c, scratch);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a.clone() + ratio.clone() * (b.clone() - a.clone());
            fe = eval(&e, scratch);
        }
        probes += 1;
    }
    let (l, m, fm, r) = if fc <= fe { (a, c, fc, e) } else { (c, e, fe, b) };
    let (mut best, mut f_best) = (m, fm);
    let mut g = vec![S::zero(); x.len()];
    let mut slope_at = |gamma: &S, scratch: &mut Vec<S>| {
        trial_point(x, d, gamma, scratch);
        f.gradient(scratch, &mut g);
        dot(&g, d)
    };
    let (sl, sr) = (slope_at(&l, scratch), slope_at(&r, scratch));
    if sl < S::zero() && sr > S::zero() {
        let root = l.clone() - sl.clone() * (r.clone() - l.clone()) / (sr - sl);
        if root > l && root < r {
            trial_point(x, d, &root, scratch);
            let fv = f.value(scratch);
            if fv <= f_best {
                best = root;
                f_best = fv;
            }
        }
    }
    if f_hi <= f_best {
        best = gamma_hi.clone();
        f_best = f_hi;
    }
    if f_lo < f_best {
        best = S::zero();
    }
    best
}

/// Per-run step-size state.
#[derive(Debug, Clone)]
pub enum StepRule<S> {
    /// `2 / (2 + t)`.
    Agnostic,
    /// Short step with a known smoothness constant; `factor` multiplies the
    /// denominator (1 for the standard rule).
    Short {
        lipschitz: S,
        factor: S,
    },
    /// Adaptive Lipschitz estimation; `estimate` is `None` until the first
    /// probe.
    Adaptive {
        estimate: Option<S>,
        params: AdaptiveParams<S>,
    },
    LineSearch(LineSearchParams<S>),
}

impl<S: Scalar> Default for StepRule<S> {
    fn default() -> Self {
        StepRule::adaptive()
    }
}

impl<S: Scalar> StepRule<S> {
    pub fn adaptive() -> Self {
        StepRule::Adaptive {
            estimate: None,
            params: AdaptiveParams::default(),
        }
    }

    pub fn short(lipschitz: S) -> Self {
        StepRule::Short {
            lipschitz,
            factor: S::one(),
        }
    }

    pub fn line_search() -> Self {
        StepRule::LineSearch(LineSearchParams::default())
    }

    pub fn name(&self) -> &'static str {
        match self {
            StepRule::Agnostic => "agnostic",
            StepRule::Short { .. } => "short",
            StepRule::Adaptive { .. } => "adaptive",
            StepRule::LineSearch(_) => "line-search",
        }
    }

    /// Step size along `d` from `x` at iteration `t`, in `[0, gamma_max]`.
    #[allow(clippy::too_many_arguments)]
    pub fn compute<F: Objective<S> + ?Sized>(
        &mut self,
        t: usize,
        f: &mut F,
        f_x: &S,
        grad: &[S],
        x: &[S],
        d: &[S],
        gamma_max: &S,
        scratch: &mut Vec<S>,
    ) -> Result<S> {
        match self {
            StepRule::Agnostic => Ok(agnostic_step::<S>(t).min_of(gamma_max.clone())),
            StepRule::Short { lipschitz, factor } => {
                let gap = -dot(grad, d);
                Ok(short_step_scaled(&gap, &norm_sq(d), lipschitz, factor, gamma_max))
            }
            StepRule::Adaptive { estimate, params } => {
                let m_in = match estimate.take() {
                    Some(m) => m,
                    None => probe_lipschitz(f, grad, x, d, gamma_max),
                };
                let (gamma, m_out) = adaptive_step(f, f_x, grad, x, d, gamma_max, &m_in, params, scratch)?;
                *estimate = Some(m_out);
                Ok(gamma)
            }
            StepRule::LineSearch(params) => Ok(segment_line_search(f, x, d, gamma_max, params, scratch)),
        }
    }
}
