use super::{check_len, LinearMinimizationOracle, OracleAnswer, OracleStatus};
use crate::atoms::{Atom, Sign};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Index of the smallest entry; lowest index on ties.
fn argmin<S: Scalar>(d: &[S]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in d.iter().enumerate() {
        if best.is_none_or(|b| *v < d[b]) {
            best = Some(i);
        }
    }
    best
}

/// Index of the entry with largest magnitude; lowest index on ties.
fn argmax_abs<S: Scalar>(d: &[S]) -> Option<usize> {
    let mut best: Option<(usize, S)> = None;
    for (i, v) in d.iter().enumerate() {
        let a = v.abs();
        if best.as_ref().is_none_or(|(_, b)| a > *b) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i)
}

/// `tau * e_{argmin d}` over `{x >= 0, sum x = tau}`.
pub fn probability_simplex_lmo<S: Scalar>(d: &[S], tau: &S) -> Result<Atom<S>> {
    let i = argmin(d).ok_or(Error::EmptyDirection)?;
    Atom::scaled_unit(d.len(), i, tau.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpNorm {
    L1,
    L2,
    LInf,
}

/// `min <d, x>` over `{||x||_p <= tau}` for `p` in `{1, 2, inf}`.
pub fn lp_ball_lmo(d: &[f64], tau: f64, p: LpNorm) -> Result<OracleAnswer<f64>> {
    match p {
        LpNorm::L1 => l1_ball_point(d, &tau).map(OracleAnswer::exact),
        LpNorm::LInf => linf_ball_point(d, &tau).map(OracleAnswer::exact),
        LpNorm::L2 => l2_ball_point(d, tau),
    }
}

fn l1_ball_point<S: Scalar>(d: &[S], tau: &S) -> Result<Atom<S>> {
    let i = argmax_abs(d).ok_or(Error::EmptyDirection)?;
    let coeff = -(d[i].sign_nonneg() * tau.clone());
    Atom::scaled_unit(d.len(), i, coeff)
}

fn linf_ball_point<S: Scalar>(d: &[S], tau: &S) -> Result<Atom<S>> {
    if d.is_empty() {
        return Err(Error::EmptyDirection);
    }
    Ok(Atom::Dense(
        d.iter().map(|v| -(v.sign_nonneg() * tau.clone())).collect(),
    ))
}

fn l2_ball_point(d: &[f64], tau: f64) -> Result<OracleAnswer<f64>> {
    if d.is_empty() {
        return Err(Error::EmptyDirection);
    }
    let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut v = vec![0.0; d.len()];
        v[0] = tau;
        return Ok(OracleAnswer {
            atom: Atom::Dense(v),
            status: OracleStatus::DegenerateDirection,
        });
    }
    Ok(OracleAnswer::exact(Atom::Dense(
        d.iter().map(|v| -tau * v / norm).collect(),
    )))
}

/// Signed `K`-support point over `tau * (B_1(K) ∩ B_inf(1))`.
pub fn ksparse_lmo<S: Scalar>(d: &[S], tau: &S, k: usize) -> Result<Atom<S>> {
    if k > d.len() {
        return Err(Error::SparsityTooLarge { k, dim: d.len() });
    }
    if k == 0 {
        return Err(Error::InvalidParameter("sparsity must be positive".into()));
    }
    let mut order: Vec<usize> = (0..d.len()).collect();
    // stable sort keeps lowest index first among equal magnitudes
    order.sort_by(|&a, &b| d[b].abs().partial_cmp(&d[a].abs()).unwrap_or(std::cmp::Ordering::Equal));
    let mut support: Vec<usize> = order[..k].to_vec();
    support.sort_unstable();
    let signs = support.iter().map(|&i| Sign::of(&d[i]).flip()).collect();
    Atom::signed_support(d.len(), support, signs, tau.clone())
}

#[derive(Debug, Clone)]
pub struct ProbabilitySimplex<S> {
    pub dim: usize,
    pub radius: S,
}

impl<S: Scalar> ProbabilitySimplex<S> {
    pub fn new(dim: usize, radius: S) -> Self {
        Self { dim, radius }
    }
}

impl<S: Scalar> LinearMinimizationOracle<S> for ProbabilitySimplex<S> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        check_len(self.dim, direction.len())?;
        probability_simplex_lmo(direction, &self.radius).map(OracleAnswer::exact)
    }
}

#[derive(Debug, Clone)]
pub struct L1Ball<S> {
    pub dim: usize,
    pub radius: S,
}

impl<S: Scalar> L1Ball<S> {
    pub fn new(dim: usize, radius: S) -> Self {
        Self { dim, radius }
    }
}

impl<S: Scalar> LinearMinimizationOracle<S> for L1Ball<S> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        check_len(self.dim, direction.len())?;
        l1_ball_point(direction, &self.radius).map(OracleAnswer::exact)
    }
}

#[derive(Debug, Clone)]
pub struct LInfBall<S> {
    pub dim: usize,
    pub radius: S,
}

impl<S: Scalar> LInfBall<S> {
    pub fn new(dim: usize, radius: S) -> Self {
        Self { dim, radius }
    }
}

impl<S: Scalar> LinearMinimizationOracle<S> for LInfBall<S> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        check_len(self.dim, direction.len())?;
        linf_ball_point(direction, &self.radius).map(OracleAnswer::exact)
    }
}

/// Euclidean ball; needs square roots so it is `f64` only.
#[derive(Debug, Clone)]
pub struct L2Ball {
    pub dim: usize,
    pub radius: f64,
}

impl L2Ball {
    pub fn new(dim: usize, radius: f64) -> Self {
        Self { dim, radius }
    }
}

impl LinearMinimizationOracle<f64> for L2Ball {
    fn dim(&self) -> usize {
        self.dim
    }

    fn extreme_point(&self, direction: &[f64]) -> Result<OracleAnswer<f64>> {
        check_len(self.dim, direction.len())?;
        l2_ball_point(direction, self.radius)
    }
}

#[derive(Debug, Clone)]
pub struct KSparsePolytope<S> {
    pub dim: usize,
    pub k: usize,
    pub radius: S,
}

impl<S: Scalar> KSparsePolytope<S> {
    pub fn new(dim: usize, k: usize, radius: S) -> Result<Self> {
        if k == 0 || k > dim {
            return Err(Error::SparsityTooLarge { k, dim });
        }
        Ok(Self { dim, k, radius })
    }
}

impl<S: Scalar> LinearMinimizationOracle<S> for KSparsePolytope<S> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn extreme_point(&self, direction: &[S]) -> Result<OracleAnswer<S>> {
        check_len(self.dim, direction.len())?;
        ksparse_lmo(direction, &self.radius, self.k).map(OracleAnswer::exact)
    }
}
