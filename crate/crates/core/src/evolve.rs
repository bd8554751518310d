//! Step-by-step evolution of the reduced register state.
//!
//! Two independent routes produce the marked-state probability after `m`
//! kernel applications: the spectral closed form built from the amplitude
//! components, and plain repeated 2x2 matrix-vector products. The second one
//! works for every kernel (including the degenerate identity) and serves as
//! the oracle for the first.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{make_kernel, AmplitudeDecomposition, Analysis, GroverParams, SpectralData};

/// Below this `|delta_omega|` the kernel does not rotate and no step count exists.
pub const ZERO_GAP_TOL: f64 = 1e-13;

/// Upper bound on the horizon [`argmax_steps`] derives on its own.
pub const MAX_DEFAULT_HORIZON: usize = 10_000_000;

/// Amplitudes on `|x0>` and `|x_perp>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub c0: Complex64,
    pub cp: Complex64,
}

impl ReducedState {
    pub fn norm(&self) -> f64 {
        (self.c0.norm_sqr() + self.cp.norm_sqr()).sqrt()
    }

    pub fn p0(&self) -> f64 {
        self.c0.norm_sqr()
    }
}

/// The uniform superposition `(1/sqrt N) |x0> + sqrt((N-1)/N) |x_perp>`.
pub fn initial_state(params: &GroverParams) -> ReducedState {
    let n = params.n() as f64;
    ReducedState {
        c0: Complex64::new(1.0 / n.sqrt(), 0.0),
        cp: Complex64::new(((n - 1.0) / n).sqrt(), 0.0),
    }
}

/// Outcome distribution with mass `p0` on the marked element and
/// `(1 - p0) / (N - 1)` on each of the others.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricDistribution {
    p0: f64,
    n: u64,
}

impl SymmetricDistribution {
    /// `p0` is clamped into `[0, 1]` to absorb rounding from `|c0|^2`.
    pub fn new(p0: f64, n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!(
                "N must be at least 2, got {n}"
            )));
        }
        if !p0.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&p0) {
            return Err(Error::InvalidArgument(format!(
                "p0 = {p0} is not a probability"
            )));
        }
        Ok(SymmetricDistribution {
            p0: p0.clamp(0.0, 1.0),
            n,
        })
    }

    pub fn uniform(n: u64) -> Result<Self> {
        Self::new(1.0 / n as f64, n)
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Probability of each unmarked element.
    pub fn p_other(&self) -> f64 {
        ((1.0 - self.p0) / (self.n - 1) as f64).max(0.0)
    }
}

/// Outcome distributions at steps `0, 1, ..., m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: GroverParams,
    steps: Vec<SymmetricDistribution>,
}

impl Trajectory {
    fn from_probabilities(params: GroverParams, probs: impl IntoIterator<Item = f64>) -> Self {
        let steps = probs
            .into_iter()
            .map(|p| {
                SymmetricDistribution::new(p, params.n()).expect("probability from unit-norm state")
            })
            .collect();
        Trajectory { params, steps }
    }

    pub fn params(&self) -> &GroverParams {
        &self.params
    }

    pub fn steps(&self) -> &[SymmetricDistribution] {
        &self.steps
    }

    pub fn get(&self, m: usize) -> Option<&SymmetricDistribution> {
        self.steps.get(m)
    }

    /// Index of the last stored step.
    pub fn last_step(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &SymmetricDistribution)> {
        self.steps.iter().enumerate()
    }

    pub fn p0_series(&self) -> Vec<f64> {
        self.steps.iter().map(|d| d.p0()).collect()
    }
}

/// States `K^m |x_in>` for `m = 0 ..= m_max`, by repeated multiplication.
pub fn iterate_states(params: &GroverParams, m_max: usize) -> Vec<ReducedState> {
    let kernel = make_kernel(*params);
    let mut state = initial_state(params);
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(state);
    for _ in 0..m_max {
        let [c0, cp] = kernel.apply([state.c0, state.cp]);
        state = ReducedState { c0, cp };
        out.push(state);
    }
    out
}

/// Trajectory by repeated 2x2 matrix-vector multiplication.
pub fn iterate_trajectory(params: &GroverParams, m_max: usize) -> Trajectory {
    Trajectory::from_probabilities(
        *params,
        iterate_states(params, m_max).iter().map(|s| s.p0()),
    )
}

/// `a1 e^{i m omega1} + a2 e^{i m omega2}`.
pub fn amplitude_at_step(
    decomp: &AmplitudeDecomposition,
    spectral: &SpectralData,
    m: usize,
) -> Complex64 {
    let m = m as f64;
    decomp.a[0] * Complex64::from_polar(1.0, m * spectral.omega[0])
        + decomp.a[1] * Complex64::from_polar(1.0, m * spectral.omega[1])
}

/// `| |a1| + |a2| e^{i (m delta_omega + delta_a)} |^2`.
pub fn probability_at_step(
    decomp: &AmplitudeDecomposition,
    spectral: &SpectralData,
    m: usize,
) -> f64 {
    let phase = m as f64 * spectral.delta_omega + decomp.delta_a;
    (Complex64::new(decomp.a[0].norm(), 0.0) + Complex64::from_polar(decomp.a[1].norm(), phase))
        .norm_sqr()
}

/// Trajectory from the spectral closed form.
pub fn spectral_trajectory(analysis: &Analysis, m_max: usize) -> Trajectory {
    Trajectory::from_probabilities(
        *analysis.params(),
        (0..=m_max).map(|m| probability_at_step(&analysis.decomp, &analysis.spectral, m)),
    )
}

/// Spectral trajectory, or the iterated one when the spectrum is degenerate.
pub fn trajectory(params: &GroverParams, m_max: usize) -> Trajectory {
    match Analysis::new(*params) {
        Ok(a) => spectral_trajectory(&a, m_max),
        Err(_) => iterate_trajectory(params, m_max),
    }
}

/// Number of kernel applications that best aligns `a1` and `a2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub m: usize,
    pub p_at_m: f64,
    pub delta_a: f64,
    pub delta_omega: f64,
    /// The quantity rounded to obtain `m`, after the forward-turn correction.
    pub ratio: f64,
}

/// `-delta_a / delta_omega`.
pub fn alignment_ratio(decomp: &AmplitudeDecomposition, spectral: &SpectralData) -> f64 {
    -decomp.delta_a / spectral.delta_omega
}

/// `M = [-delta_a / delta_omega]`, rounding half away from zero.
///
/// When the ratio is negative the alignment lies behind the rotation, so one
/// full turn in the direction of rotation is added before rounding.
pub fn optimal_steps(decomp: &AmplitudeDecomposition, spectral: &SpectralData) -> Result<StepPlan> {
    let dw = spectral.delta_omega;
    if dw.abs() < ZERO_GAP_TOL {
        return Err(Error::ZeroPhaseGap(dw.abs()));
    }
    let mut ratio = alignment_ratio(decomp, spectral);
    if ratio < 0.0 {
        ratio = (-decomp.delta_a + TAU * dw.signum()) / dw;
    }
    let m = ratio.round() as usize;
    Ok(StepPlan {
        m,
        p_at_m: probability_at_step(decomp, spectral, m),
        delta_a: decomp.delta_a,
        delta_omega: dw,
        ratio,
    })
}

/// Convenience wrapper running the full pipeline for `params`.
pub fn plan_steps(params: &GroverParams) -> Result<StepPlan> {
    let a = Analysis::new(*params)?;
    optimal_steps(&a.decomp, &a.spectral)
}

/// `ceil(2 pi / |delta_omega|) + 1`, one full turn of the relative phase.
pub fn default_horizon(params: &GroverParams) -> Result<usize> {
    let a = Analysis::new(*params)?;
    let dw = a.spectral.delta_omega.abs();
    if dw < ZERO_GAP_TOL {
        return Err(Error::ZeroPhaseGap(dw));
    }
    let h = (TAU / dw).ceil() + 1.0;
    if h > MAX_DEFAULT_HORIZON as f64 {
        return Err(Error::InvalidArgument(format!(
            "default horizon {h} exceeds {MAX_DEFAULT_HORIZON}; supply one explicitly"
        )));
    }
    Ok(h as usize)
}

/// First step index in `0 ..= horizon` attaining the maximum marked-state
/// probability along the iterated trajectory.
///
/// With `horizon = None` the default horizon is used, which needs a
/// non-degenerate spectrum.
pub fn argmax_steps(params: &GroverParams, horizon: Option<usize>) -> Result<(usize, f64)> {
    let horizon = match horizon {
        Some(0) => return Err(Error::InvalidArgument("horizon must be at least 1".into())),
        Some(h) => h,
        None => default_horizon(params)?,
    };
    let traj = iterate_trajectory(params, horizon);
    let mut best = (0, traj.steps[0].p0());
    for (m, d) in traj.iter().skip(1) {
        if d.p0() > best.1 {
            best = (m, d.p0());
        }
    }
    Ok(best)
}
