//! Dynamics of the maximal average teleportation fidelity for a one-qubit
//! state sent through a two-qubit channel whose qubits decay independently
//! into zero-temperature structured bosonic reservoirs.
//!
//! The pipeline, bottom to top:
//!
//! 1. [`spectral`] — the reservoir spectral-density family (sub-Ohmic,
//!    Ohmic, super-Ohmic), its closed-form memory kernel, and the critical
//!    coupling above which a qubit–reservoir bound state forms.
//! 2. [`volterra`] — the complex Volterra integro-differential equation for
//!    the excited-state amplitude `p(t)`, solved on a uniform grid, plus an
//!    independent discrete-mode diagonalization oracle for validation.
//! 3. [`dynamics`] — the amplitude-damping channel built from `p(t)`: the
//!    single-qubit map, its two-qubit product extension, and the
//!    time-dependent decay rate / Lamb shift extracted from a trajectory.
//! 4. [`fidelity`] — Bloch correlation tensors, the trace-norm functional
//!    `N(rho)`, the average fidelity `F_av = 1/2 + N/6`, and the closed
//!    forms for Werner-like channels.
//!
//! All frequencies are expressed in units of the qubit Bohr frequency
//! `omega_0` (which defaults to 1), and times in units of `1/omega_0`.

pub mod dynamics;
pub mod fidelity;
pub mod spectral;
pub mod volterra;

pub use dynamics::{DecayProfile, SingleQubitState, TwoQubitState};
pub use fidelity::{BlochTensor, WernerParams};
pub use spectral::{Ohmicity, SpectralParams};
pub use volterra::AmplitudeTrajectory;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
