use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The two kernel eigenvalues coincide (|xi1 - xi2| below tolerance).
    /// For unit-modulus phases this happens at beta = delta = -1, where the
    /// kernel is the identity.
    #[error("degenerate spectrum: |xi1 - xi2| = {gap:e} (beta = delta = -1 makes the kernel the identity)")]
    DegenerateSpectrum { gap: f64 },

    #[error("zero phase gap: |delta_omega| = {0:e}, the kernel does not rotate the state")]
    ZeroPhaseGap(f64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("dimension mismatch: N = {0} vs N = {1}")]
    DimensionMismatch(u64, u64),

    #[error("step {requested} is outside the trajectory (last step {last})")]
    RangeError { requested: usize, last: usize },

    #[error("step count diverges: cos(t/2) = {0:e}")]
    DivergentSteps(f64),

    #[error("no root: f has constant sign on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoRoot {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("t = {0} lies inside the guard band |t - pi| < {1}")]
    GuardBand(f64, f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
