//! The 2x2 Grover kernel on the span of the marked state `|x0>` and the
//! uniform superposition `|x_perp>` of the unmarked states.
//!
//! Everything downstream is driven by three quantities computed here: the
//! eigenphases `omega1`, `omega2` of the kernel, their wrapped gap
//! `delta_omega`, and the amplitude components `a1`, `a2` such that the
//! marked-state amplitude after `m` steps is `a1 e^{i m omega1} + a2 e^{i m omega2}`.
//!
//! Angles are reported on the principal branch `(-pi, pi]`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Two eigenvalues closer than this are treated as one.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Closed-form eigenvectors with a larger residual are recomputed from the
/// null space of `K - xi I`.
const CLOSED_FORM_RESIDUAL_TOL: f64 = 1e-11;

/// Angles closer than this (on the circle) are considered equal by
/// [`GroverParams::is_efficient`].
pub const ANGLE_EQ_TOL: f64 = 1e-12;

/// Returns the unique angle in `(-pi, pi]` congruent to `theta` modulo `2 pi`.
pub fn principal_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Principal square root; on the negative real axis the root with positive
/// imaginary part is returned regardless of the sign of the zero.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        Complex64::new(0.0, (-z.re).sqrt())
    } else {
        z.sqrt()
    }
}

fn wrap_positive(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Dimension and phase angles of a generalized Grover algorithm,
/// with `beta = e^{it}` and `delta = e^{ig}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverParams {
    n: u64,
    t: f64,
    g: f64,
}

impl GroverParams {
    pub fn new(n: u64, t: f64, g: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!(
                "N must be at least 2, got {n}"
            )));
        }
        if !t.is_finite() || !g.is_finite() {
            return Err(Error::InvalidParams(format!(
                "angles must be finite (t = {t}, g = {g})"
            )));
        }
        Ok(GroverParams {
            n,
            t: wrap_positive(t),
            g: wrap_positive(g),
        })
    }

    /// `beta = delta = e^{it}`.
    pub fn efficient(n: u64, t: f64) -> Result<Self> {
        Self::new(n, t, t)
    }

    /// `beta = e^{it}`, `delta = e^{i(t + offset)}`.
    pub fn with_offset(n: u64, t: f64, offset: f64) -> Result<Self> {
        Self::new(n, t, t + offset)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `t` wrapped into `[0, 2 pi)`.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// `g` wrapped into `[0, 2 pi)`.
    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.t)
    }

    pub fn delta(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.g)
    }

    /// `beta = delta != -1`.
    pub fn is_efficient(&self) -> bool {
        principal_phase(self.t - self.g).abs() <= ANGLE_EQ_TOL
            && principal_phase(self.t - PI).abs() > ANGLE_EQ_TOL
    }
}

/// A complex 2x2 matrix in the `{|x0>, |x_perp>}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    entries: [[Complex64; 2]; 2],
    params: GroverParams,
}

/// Builds the kernel
///
/// ```text
/// K = 1/N [ 1 + delta (1 - N)          -beta (1 + delta) sqrt(N - 1) ]
///         [ (1 + delta) sqrt(N - 1)    beta (1 + delta - N)          ]
/// ```
pub fn make_kernel(params: GroverParams) -> Kernel {
    let n = params.n as f64;
    let beta = params.beta();
    let delta = params.delta();
    let one = Complex64::new(1.0, 0.0);
    let root = (n - 1.0).sqrt();
    let entries = [
        [
            (one + delta * (1.0 - n)) / n,
            -beta * (one + delta) * root / n,
        ],
        [(one + delta) * root / n, beta * (one + delta - n) / n],
    ];
    Kernel { entries, params }
}

impl Kernel {
    pub fn params(&self) -> &GroverParams {
        &self.params
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let k = &self.entries;
        [
            k[0][0] * v[0] + k[0][1] * v[1],
            k[1][0] * v[0] + k[1][1] * v[1],
        ]
    }

    /// Largest entry modulus of `K^dagger K - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let k = &self.entries;
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut s: Complex64 = k.iter().map(|row| row[i].conj() * row[j]).sum();
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

/// Eigenvalues, eigenphases and normalized eigenvectors of a kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    pub xi: [Complex64; 2],
    /// Principal arguments of `xi`, in `(-pi, pi]`.
    pub omega: [f64; 2],
    /// Unit eigenvectors; `kappa[j]` belongs to `xi[j]`.
    pub kappa: [[Complex64; 2]; 2],
    /// `A = (beta - delta) N + (1 - beta)(1 + delta)`.
    pub aux_a: Complex64,
    /// `principal_phase(omega2 - omega1)`.
    pub delta_omega: f64,
}

impl SpectralData {
    pub fn omega1(&self) -> f64 {
        self.omega[0]
    }

    pub fn omega2(&self) -> f64 {
        self.omega[1]
    }

    /// `|| K kappa_j - xi_j kappa_j ||` for the given kernel.
    pub fn residual(&self, kernel: &Kernel, j: usize) -> f64 {
        let kv = kernel.apply(self.kappa[j]);
        let d0 = kv[0] - self.xi[j] * self.kappa[j][0];
        let d1 = kv[1] - self.xi[j] * self.kappa[j][1];
        (d0.norm_sqr() + d1.norm_sqr()).sqrt()
    }
}

fn normalize(v: [Complex64; 2]) -> Option<[Complex64; 2]> {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return None;
    }
    Some([v[0] / norm, v[1] / norm])
}

/// Null vector of `K - xi I` taken from its better-conditioned row.
fn null_vector(kernel: &Kernel, xi: Complex64) -> [Complex64; 2] {
    let k = kernel.entries();
    let r0 = [k[0][0] - xi, k[0][1]];
    let r1 = [k[1][0], k[1][1] - xi];
    let n0 = r0[0].norm_sqr() + r0[1].norm_sqr();
    let n1 = r1[0].norm_sqr() + r1[1].norm_sqr();
    let r = if n0 >= n1 { r0 } else { r1 };
    if n0.max(n1) == 0.0 {
        return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    [r[1], -r[0]]
}

/// Computes the eigensystem in closed form.
///
/// `xi_{1,2} = Tr K / 2 -+ sqrt(-det K + (Tr K)^2 / 4)` with the principal
/// square root. Eigenvectors are `((A -+ N sqrt(-4 det K + (Tr K)^2)) /
/// (2 (1 + delta) sqrt(N - 1)), 1)`, normalized. Where that expression is
/// unusable (`delta = -1` makes the kernel diagonal) the eigenvector is
/// taken from the null space of `K - xi I` directly.
pub fn eigensystem(kernel: &Kernel) -> Result<SpectralData> {
    let p = kernel.params();
    let n = p.n as f64;
    let beta = p.beta();
    let delta = p.delta();
    let one = Complex64::new(1.0, 0.0);

    let tr = kernel.trace();
    let det = kernel.det();
    let s = principal_sqrt(-det + tr * tr / 4.0);
    let xi = [tr / 2.0 - s, tr / 2.0 + s];
    let gap = (xi[0] - xi[1]).norm();
    if gap < DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum { gap });
    }

    let aux_a = (beta - delta) * n + (one - beta) * (one + delta);
    let denom = (one + delta) * 2.0 * (n - 1.0).sqrt();
    // sqrt(-4 det N^2 + Tr^2 N^2) = 2 N s on the principal branch
    let disc = s * 2.0 * n;

    let mut kappa = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (j, sign) in [-1.0, 1.0].into_iter().enumerate() {
        let closed_form = normalize([(aux_a + disc * sign) / denom, one]);
        kappa[j] = match closed_form {
            Some(v) if residual_of(kernel, xi[j], v) <= CLOSED_FORM_RESIDUAL_TOL => v,
            _ => normalize(null_vector(kernel, xi[j])).expect("non-zero null vector"),
        };
    }

    let omega = [principal_phase(xi[0].arg()), principal_phase(xi[1].arg())];
    Ok(SpectralData {
        xi,
        omega,
        kappa,
        aux_a,
        delta_omega: principal_phase(omega[1] - omega[0]),
    })
}

fn residual_of(kernel: &Kernel, xi: Complex64, v: [Complex64; 2]) -> f64 {
    let kv = kernel.apply(v);
    ((kv[0] - xi * v[0]).norm_sqr() + (kv[1] - xi * v[1]).norm_sqr()).sqrt()
}

/// `a1`, `a2` and their wrapped phase difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeDecomposition {
    pub a: [Complex64; 2],
    /// `principal_phase(Arg a2 - Arg a1)`.
    pub delta_a: f64,
}

impl AmplitudeDecomposition {
    pub fn a1(&self) -> Complex64 {
        self.a[0]
    }

    pub fn a2(&self) -> Complex64 {
        self.a[1]
    }

    /// `|a1| + |a2|`; equals 1 on the efficient manifold.
    pub fn sum_abs(&self) -> f64 {
        self.a[0].norm() + self.a[1].norm()
    }
}

/// `a_j = (|<x0|kappa_j>|^2 + sqrt(N-1) <x0|kappa_j><kappa_j|x_perp>) / sqrt(N)`.
pub fn amplitude_components(kernel: &Kernel, spectral: &SpectralData) -> AmplitudeDecomposition {
    let n = kernel.params().n as f64;
    let root = (n - 1.0).sqrt();
    let a = spectral
        .kappa
        .map(|k| (k[0].norm_sqr() + root * k[0] * k[1].conj()) / n.sqrt());
    AmplitudeDecomposition {
        a,
        delta_a: principal_phase(a[1].arg() - a[0].arg()),
    }
}

/// Kernel, eigensystem and amplitude components for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analysis {
    pub kernel: Kernel,
    pub spectral: SpectralData,
    pub decomp: AmplitudeDecomposition,
}

impl Analysis {
    pub fn new(params: GroverParams) -> Result<Self> {
        let kernel = make_kernel(params);
        let spectral = eigensystem(&kernel)?;
        let decomp = amplitude_components(&kernel, &spectral);
        Ok(Analysis {
            kernel,
            spectral,
            decomp,
        })
    }

    pub fn params(&self) -> &GroverParams {
        self.kernel.params()
    }
}
