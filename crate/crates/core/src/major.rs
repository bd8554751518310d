//! Majorization of probability distributions.
//!
//! `p` is majorized by `q` (`p < q`) when every prefix sum of `p` sorted in
//! decreasing order is at most the matching prefix sum of `q`. The prefix
//! sums are the cumulants `C_1 ..= C_N`; plotted against `k` they form the
//! Lorenz curve.
//!
//! Generalized Grover trajectories only ever produce symmetric
//! distributions (one marked value, `N - 1` equal others), for which the
//! comparison reduces to a constant-time rule. The generic path via
//! [`expand`] and [`majorizes`] is kept for oracles and Lorenz output.

use crate::error::{Error, Result};
use crate::evolve::{SymmetricDistribution, Trajectory};

/// Slack allowed on every cumulant inequality; ties count as majorizing.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Probabilities sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedDistribution {
    probs: Vec<f64>,
}

impl SortedDistribution {
    /// Sorts `probs` in decreasing order after checking it is a distribution.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < -1e-12) {
            return Err(Error::InvalidArgument(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        probs.sort_by(|a, b| b.total_cmp(a));
        Ok(SortedDistribution { probs })
    }

    pub fn uniform(n: usize) -> Self {
        SortedDistribution {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Cumulants of the distribution at one trajectory step.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCurve {
    pub m: usize,
    pub cumulants: Vec<f64>,
}

/// Outcome of a step-by-step majorization check.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationReport {
    pub holds_overall: bool,
    /// `(m, holds)` for the transition `m -> m + 1`.
    pub per_step: Vec<(usize, bool)>,
    pub first_violation: Option<Violation>,
    /// Steps `0 ..= m_end` were inspected.
    pub checked_range: (usize, usize),
}

/// The first transition `step -> step + 1` whose later distribution fails
/// to majorize the earlier one.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub step: usize,
    pub before: SymmetricDistribution,
    pub after: SymmetricDistribution,
}

impl Violation {
    /// Full cumulant vectors of the two distributions, for Lorenz plots.
    pub fn cumulant_vectors(&self) -> (Vec<f64>, Vec<f64>) {
        (
            cumulants(&expand(&self.before)).cumulants,
            cumulants(&expand(&self.after)).cumulants,
        )
    }
}

/// Materializes the sorted N-vector of a symmetric distribution.
pub fn expand(dist: &SymmetricDistribution) -> SortedDistribution {
    let n = dist.n() as usize;
    let p0 = dist.p0();
    let q = dist.p_other();
    let mut probs = vec![q; n];
    if p0 >= q {
        probs[0] = p0;
    } else {
        probs[n - 1] = p0;
    }
    SortedDistribution { probs }
}

/// Prefix sums `C_k = sum_{i <= k} probs[i]`.
pub fn cumulants(dist: &SortedDistribution) -> LorenzCurve {
    let cumulants = dist
        .probs
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    LorenzCurve { m: 0, cumulants }
}

/// Whether `q` majorizes `p` (`p < q`): `C_k(p) <= C_k(q)` for every `k`.
pub fn majorizes(q: &SortedDistribution, p: &SortedDistribution) -> Result<bool> {
    if q.len() != p.len() {
        return Err(Error::LengthMismatch(q.len(), p.len()));
    }
    let cq = cumulants(q).cumulants;
    let cp = cumulants(p).cumulants;
    Ok(cp.iter().zip(&cq).all(|(a, b)| *a <= *b + MAJORIZATION_TOL))
}

/// `C_k` of the sorted form of a symmetric distribution, in closed form.
fn symmetric_cumulant(d: &SymmetricDistribution, k: u64) -> f64 {
    let q = d.p_other();
    if d.p0() >= q {
        d.p0() + (k - 1) as f64 * q
    } else {
        k as f64 * q
    }
}

/// Whether `q` majorizes `p` for two symmetric distributions over the same N.
///
/// Both cumulant sequences are affine in `k` on `1 ..= N - 1` and equal 1 at
/// `k = N`, so comparing the endpoints `k = 1` and `k = N - 1` decides the
/// whole order. When both marked probabilities are at least `1/N` this is
/// just `q.p0 >= p.p0`.
pub fn symmetric_majorizes(q: &SymmetricDistribution, p: &SymmetricDistribution) -> Result<bool> {
    if q.n() != p.n() {
        return Err(Error::DimensionMismatch(q.n(), p.n()));
    }
    let n = q.n();
    let uniform = 1.0 / n as f64;
    if q.p0() >= uniform && p.p0() >= uniform {
        return Ok(q.p0() >= p.p0() - MAJORIZATION_TOL);
    }
    Ok([1, n - 1]
        .into_iter()
        .all(|k| symmetric_cumulant(p, k) <= symmetric_cumulant(q, k) + MAJORIZATION_TOL))
}

/// Checks `p(m) < p(m + 1)` for `m = 0 .. m_end`.
pub fn step_by_step_check(traj: &Trajectory, m_end: usize) -> Result<MajorizationReport> {
    if m_end > traj.last_step() {
        return Err(Error::RangeError {
            requested: m_end,
            last: traj.last_step(),
        });
    }
    let steps = traj.steps();
    let mut per_step = Vec::with_capacity(m_end);
    let mut first_violation = None;
    for m in 0..m_end {
        let holds = symmetric_majorizes(&steps[m + 1], &steps[m])?;
        if !holds && first_violation.is_none() {
            first_violation = Some(Violation {
                step: m,
                before: steps[m],
                after: steps[m + 1],
            });
        }
        per_step.push((m, holds));
    }
    Ok(MajorizationReport {
        holds_overall: first_violation.is_none(),
        per_step,
        first_violation,
        checked_range: (0, m_end),
    })
}

/// Lorenz curves for steps `0, stride, 2 stride, ...` of the trajectory.
pub fn lorenz_series(traj: &Trajectory, stride: usize) -> Result<Vec<LorenzCurve>> {
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    Ok(traj
        .iter()
        .step_by(stride)
        .map(|(m, d)| LorenzCurve {
            m,
            ..cumulants(&expand(d))
        })
        .collect())
}
