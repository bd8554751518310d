//! Large-N behaviour on the efficient manifold `beta = delta = e^{it}`.
//!
//! To order `1/sqrt(N)`:
//!
//! ```text
//! delta_omega ~ 2 atan(2 cos(t/2) / sqrt N)       ~ 4 cos(t/2) / sqrt N
//! delta_a     ~ 2 atan(2 cos(t/2) / sqrt N) - pi  ~ 4 cos(t/2) / sqrt N - pi
//! M           ~ [pi sqrt(N) / (4 cos(t/2))]
//! ```
//!
//! The module also measures how far these are from the exact eigensystem
//! and searches for phases `t` where `-delta_a / delta_omega` is an integer,
//! which makes the search succeed with certainty.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::evolve::{alignment_ratio, probability_at_step};
use crate::kernel::{Analysis, GroverParams};

/// Error sweeps reject grid points with `|t - pi| < GUARD_BAND`.
pub const GUARD_BAND: f64 = 0.5;

/// Target residual of the alignment equation.
pub const ALIGNMENT_TOL: f64 = 1e-9;

const ROOT_MAX_ITERS: usize = 200;

pub fn approx_delta_omega(t: f64, n: u64) -> f64 {
    2.0 * (2.0 * (t / 2.0).cos() / (n as f64).sqrt()).atan()
}

pub fn approx_delta_a(t: f64, n: u64) -> f64 {
    approx_delta_omega(t, n) - PI
}

pub fn small_angle_delta_omega(t: f64, n: u64) -> f64 {
    4.0 * (t / 2.0).cos() / (n as f64).sqrt()
}

pub fn small_angle_delta_a(t: f64, n: u64) -> f64 {
    small_angle_delta_omega(t, n) - PI
}

/// `round(pi sqrt(N) / (4 |cos(t/2)|))`.
///
/// The modulus makes the result independent of whether `t` or `t + 2 pi`
/// is passed.
pub fn approx_steps(t: f64, n: u64) -> Result<u64> {
    let c = (t / 2.0).cos();
    if c.abs() <= 1e-9 {
        return Err(Error::DivergentSteps(c));
    }
    Ok((PI * (n as f64).sqrt() / (4.0 * c.abs())).round() as u64)
}

/// Exact gap against the arctan approximation at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxReport {
    pub t: f64,
    pub n: u64,
    /// Exact `delta_omega`, with its sign oriented like the approximation.
    pub exact_dw: f64,
    pub approx_dw: f64,
    pub abs_err: f64,
    /// `(approx - exact) / exact * 100`; NaN when `|exact| <= 1e-13`.
    pub rel_err_percent: f64,
}

/// Exact `delta_omega` at `(N, t, g = t)` oriented to share the sign of
/// [`approx_delta_omega`].
///
/// Swapping the eigenvalue labels negates the gap, and the principal-branch
/// labeling switches orientation across the branch cut at `t = 0`; the
/// magnitude is label independent.
pub fn oriented_exact_delta_omega(t: f64, n: u64) -> Result<f64> {
    let a = Analysis::new(GroverParams::efficient(n, t)?)?;
    let dw = a.spectral.delta_omega;
    let approx = approx_delta_omega(t, n);
    Ok(if dw * approx < 0.0 { -dw } else { dw })
}

/// `points` uniformly spaced values `2 pi i / points` in `[0, 2 pi)`,
/// dropping those inside the guard band around `pi`.
pub fn guarded_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| TAU * i as f64 / points as f64)
        .filter(|t| (t - PI).abs() >= GUARD_BAND)
        .collect()
}

/// Compares the arctan approximation of `delta_omega` with the exact value
/// at every grid point.
pub fn approximation_error_sweep(n: u64, t_grid: &[f64]) -> Result<Vec<ApproxReport>> {
    t_grid
        .iter()
        .map(|&t| {
            if (crate::kernel::principal_phase(t - PI)).abs() < GUARD_BAND {
                return Err(Error::GuardBand(t, GUARD_BAND));
            }
            let exact_dw = oriented_exact_delta_omega(t, n)?;
            let approx_dw = approx_delta_omega(t, n);
            let rel_err_percent = if exact_dw.abs() > 1e-13 {
                (approx_dw - exact_dw) / exact_dw * 100.0
            } else {
                f64::NAN
            };
            Ok(ApproxReport {
                t,
                n,
                exact_dw,
                approx_dw,
                abs_err: (approx_dw - exact_dw).abs(),
                rel_err_percent,
            })
        })
        .collect()
}

/// A phase `t` at which `M` steps align the amplitude components exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentSolution {
    pub t: f64,
    pub m: usize,
    pub ratio: f64,
    pub p_success: f64,
}

fn alignment_residual(n: u64, m_target: usize, t: f64) -> Result<f64> {
    let a = Analysis::new(GroverParams::efficient(n, t)?)?;
    Ok(alignment_ratio(&a.decomp, &a.spectral) - m_target as f64)
}

/// Solves `-delta_a(t) / delta_omega(t) = m_target` on the efficient
/// manifold inside `bracket`.
///
/// Secant steps are accepted when they land strictly inside the current
/// bracket; every secant step is followed by a bisection step so the
/// bracket at least halves per iteration.
pub fn find_exact_alignment(
    n: u64,
    m_target: usize,
    bracket: (f64, f64),
) -> Result<AlignmentSolution> {
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let f = |t: f64| alignment_residual(n, m_target, t);
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;

    let root = if f_lo.abs() <= ALIGNMENT_TOL {
        lo
    } else if f_hi.abs() <= ALIGNMENT_TOL {
        hi
    } else if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot { lo, hi, f_lo, f_hi });
    } else {
        let mut best = if f_lo.abs() < f_hi.abs() {
            (lo, f_lo)
        } else {
            (hi, f_hi)
        };
        for _ in 0..ROOT_MAX_ITERS {
            let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            let mid = 0.5 * (lo + hi);
            for x in [secant, mid] {
                if !(x > lo && x < hi) {
                    continue;
                }
                let fx = f(x)?;
                if fx.abs() < best.1.abs() {
                    best = (x, fx);
                }
                if fx.signum() == f_lo.signum() {
                    lo = x;
                    f_lo = fx;
                } else {
                    hi = x;
                    f_hi = fx;
                }
            }
            if best.1.abs() <= 1e-12 || hi - lo <= 1e-15 {
                break;
            }
        }
        best.0
    };

    let a = Analysis::new(GroverParams::efficient(n, root)?)?;
    let ratio = alignment_ratio(&a.decomp, &a.spectral);
    Ok(AlignmentSolution {
        t: root,
        m: m_target,
        ratio,
        p_success: probability_at_step(&a.decomp, &a.spectral, m_target),
    })
}

/// First sub-interval of `[0, pi)` on which the alignment residual changes
/// sign (or vanishes at the left end), scanning `samples` points.
pub fn alignment_bracket(n: u64, m_target: usize, samples: usize) -> Result<(f64, f64)> {
    let upper = PI - 1e-3;
    let samples = samples.max(2);
    let ts: Vec<f64> = (0..samples)
        .map(|i| upper * i as f64 / (samples - 1) as f64)
        .collect();
    let mut prev = (ts[0], alignment_residual(n, m_target, ts[0])?);
    if prev.1.abs() <= ALIGNMENT_TOL {
        return Ok((prev.0, ts[1]));
    }
    for &t in &ts[1..] {
        let ft = alignment_residual(n, m_target, t)?;
        if ft.signum() != prev.1.signum() || ft.abs() <= ALIGNMENT_TOL {
            return Ok((prev.0, t));
        }
        prev = (t, ft);
    }
    let f0 = alignment_residual(n, m_target, ts[0])?;
    Err(Error::NoRoot {
        lo: 0.0,
        hi: upper,
        f_lo: f0,
        f_hi: prev.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::plan_steps;

    #[test]
    fn approx_delta_omega_values() {
        let v = approx_delta_omega(0.0, 1000);
        assert!((v - 0.126_322_855).abs() < 1e-8, "{v}");
        assert!(approx_delta_omega(PI, 123).abs() < 1e-15);
        assert!((approx_delta_omega(0.0, 4) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn approx_small_n_error_is_large() {
        let exact = oriented_exact_delta_omega(0.0, 4).unwrap();
        assert!((exact - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((approx_delta_omega(0.0, 4) - exact).abs() > 0.5);
    }

    #[test]
    fn approx_delta_a_values() {
        assert!((approx_delta_a(0.0, 1000) + 3.015_26).abs() < 1e-5);
        let big = approx_delta_a(0.0, 1_000_000);
        assert!((big + PI - 0.004).abs() < 1e-6);
        assert!(big < 0.0 && approx_delta_omega(0.0, 1_000_000) > 0.0);
        for (t, n) in [(0.3, 7), (2.9, 1000), (5.0, 64)] {
            assert_eq!(approx_delta_a(t, n), approx_delta_omega(t, n) - PI);
        }
    }

    #[test]
    fn small_angle_values() {
        assert!((small_angle_delta_omega(0.0, 1000) - 0.126_491).abs() < 1e-6);
        assert!(small_angle_delta_omega(PI, 50).abs() < 1e-15);
        assert_eq!(
            small_angle_delta_a(1.0, 50),
            small_angle_delta_omega(1.0, 50) - PI
        );
    }

    #[test]
    fn approx_steps_values() {
        assert_eq!(approx_steps(0.0, 1000).unwrap(), 25);
        assert_eq!(approx_steps(0.0, 4).unwrap(), 2);
        assert_eq!(approx_steps(0.0, 100).unwrap(), 8);
        assert!(matches!(
            approx_steps(PI, 100),
            Err(Error::DivergentSteps(_))
        ));
        assert_eq!(
            approx_steps(-1.0, 500).unwrap(),
            approx_steps(1.0, 500).unwrap()
        );
    }

    #[test]
    fn guarded_grid_excludes_band() {
        let g = guarded_grid(64);
        assert!(g.iter().all(|t| (t - PI).abs() >= GUARD_BAND));
        // 64 points at spacing pi/32; |t - pi| < 0.5 removes i = 27..=37
        assert_eq!(g.len(), 64 - 11);
    }

    #[test]
    fn sweep_rejects_guard_band() {
        assert!(matches!(
            approximation_error_sweep(100, &[0.0, PI - 0.1]),
            Err(Error::GuardBand(..))
        ));
    }

    #[test]
    fn sweep_n1000_is_accurate() {
        let reports = approximation_error_sweep(1000, &guarded_grid(64)).unwrap();
        for r in &reports {
            assert!(r.rel_err_percent.abs() < 1.0, "{r:?}");
            assert!((r.abs_err - (r.approx_dw - r.exact_dw).abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn sweep_n4_worse_than_n1000_everywhere() {
        let grid = guarded_grid(64);
        let small = approximation_error_sweep(4, &grid).unwrap();
        let large = approximation_error_sweep(1000, &grid).unwrap();
        for (s, l) in small.iter().zip(&large) {
            assert!(
                s.rel_err_percent.abs() > l.rel_err_percent.abs(),
                "t = {}",
                s.t
            );
        }
    }

    #[test]
    fn alignment_n100() {
        // the ratio is smallest at t = 0 (7.34 for N = 100), so the first
        // reachable integer lies above it
        let plan = plan_steps(&GroverParams::efficient(100, 0.0).unwrap()).unwrap();
        assert_eq!(plan.m, 7);
        assert!(find_exact_alignment(100, plan.m, (0.0, 1.5)).is_err());
        let m = plan.ratio.ceil() as usize;
        let sol = find_exact_alignment(100, m, (0.0, 1.5)).unwrap();
        assert!((sol.ratio - m as f64).abs() <= ALIGNMENT_TOL);
        assert!(sol.p_success >= 1.0 - 1e-8, "{sol:?}");
    }

    #[test]
    fn alignment_n4_root_at_zero() {
        let sol = find_exact_alignment(4, 1, (0.0, 0.5)).unwrap();
        assert_eq!(sol.t, 0.0);
        assert!((sol.p_success - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alignment_no_root() {
        assert!(matches!(
            find_exact_alignment(100, 1_000_000, (0.1, 0.2)),
            Err(Error::NoRoot { .. })
        ));
    }

    #[test]
    fn alignment_bracket_scan() {
        let (lo, hi) = alignment_bracket(100, 8, 512).unwrap();
        let sol = find_exact_alignment(100, 8, (lo, hi)).unwrap();
        assert!(sol.p_success >= 1.0 - 1e-8);
        assert!(alignment_bracket(100, 1, 512).is_err());
    }
}
