//! Numerical laboratory for two-parameter generalized Grover search.
//!
//! The kernel `K(beta, delta)` acts on the two-dimensional subspace spanned
//! by the marked element and the uniform superposition of the rest. From its
//! exact eigensystem we get closed-form success probabilities, optimal step
//! counts and the step-by-step majorization verdicts that separate efficient
//! (`beta = delta != -1`) from non-efficient (`beta != delta`) variants.
//!
//! - [`kernel`]: parameters, kernel construction, eigensystem, amplitude components.
//! - [`evolve`]: trajectories (spectral and iterated), optimal step count.
//! - [`major`]: majorization order, Lorenz curves, step-by-step checks.
//! - [`asym`]: large-N approximations, error sweeps, exact-alignment search.
//! - [`cli`]: the `ggmaj` command-line front end.

pub mod asym;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod kernel;
pub mod major;

pub use error::{Error, Result};
pub use kernel::{
    amplitude_components, eigensystem, make_kernel, principal_phase, AmplitudeDecomposition,
    Analysis, GroverParams, Kernel, SpectralData,
};
