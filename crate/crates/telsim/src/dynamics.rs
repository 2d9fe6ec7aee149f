//! Channel maps built from the amplitude `p(t)`, and the time-dependent
//! rates extracted from a trajectory.
//!
//! Basis conventions, fixed throughout: single-qubit matrices are written
//! in `{|1>, |0>}` with the excited-state population at index `(0, 0)`;
//! two-qubit matrices in the product basis `{|11>, |10>, |01>, |00>}`.
//!
//! A qubit with amplitude `p` maps as `rho_11 -> rho_11 |p|^2`,
//! `rho_10 -> rho_10 p`, with the lost population landing in the ground
//! state. Its operator-sum form uses `E0 = diag(p, 1)` and
//! `E1 = sqrt(1 - |p|^2) |0><1|`; two qubits coupled to independent
//! reservoirs evolve under the product of two such channels.

use crate::volterra::AmplitudeTrajectory;
use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for Hermiticity and unit-trace checks on input matrices.
const MATRIX_TOL: f64 = 1e-9;
/// Eigenvalues may dip this far below zero from accumulated rounding.
const PSD_TOL: f64 = -1e-12;
/// Amplitudes may exceed unit modulus by at most this much (solver grid
/// tolerance).
const AMPLITUDE_TOL: f64 = 1e-9;
/// Rates are reported only where `|p|` exceeds this.
const EPS_P: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("matrix is not Hermitian (max deviation {max_dev})")]
    NotHermitian { max_dev: f64 },
    #[error("matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("amplitude modulus {modulus} exceeds 1 beyond tolerance")]
    AmplitudeOutOfRange { modulus: f64 },
    #[error("trajectory has {len} points; rate extraction needs at least 3")]
    TrajectoryTooShort { len: usize },
    #[error("cannot normalize decay rate: max of Gamma over the window is {gamma_max}")]
    NonPositiveRateScale { gamma_max: f64 },
}

fn check_density_matrix<const N: usize>(
    m: &nalgebra::SMatrix<Complex64, N, N>,
    min_eigenvalue: f64,
) -> Result<(), DynamicsError> {
    let mut max_dev = 0.0f64;
    for i in 0..N {
        for j in 0..N {
            max_dev = max_dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if max_dev > MATRIX_TOL {
        return Err(DynamicsError::NotHermitian { max_dev });
    }
    let trace: Complex64 = (0..N).map(|i| m[(i, i)]).sum();
    if (trace - Complex64::new(1.0, 0.0)).norm() > MATRIX_TOL {
        return Err(DynamicsError::TraceNotOne { trace: trace.re });
    }
    if min_eigenvalue < PSD_TOL {
        return Err(DynamicsError::NotPositiveSemidefinite { min_eigenvalue });
    }
    Ok(())
}

/// Single-qubit density matrix in the `{|1>, |0>}` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitState(Matrix2<Complex64>);

impl SingleQubitState {
    /// Validating constructor: Hermitian, unit trace, eigenvalues >= -1e-12.
    pub fn new(matrix: Matrix2<Complex64>) -> Result<Self, DynamicsError> {
        check_density_matrix(&matrix, matrix.symmetric_eigen().eigenvalues.min())?;
        Ok(Self(matrix))
    }

    /// Ground state `|0><0|`.
    pub fn ground() -> Self {
        let mut m = Matrix2::zeros();
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    /// Excited state `|1><1|`.
    pub fn excited() -> Self {
        let mut m = Matrix2::zeros();
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    /// Excited-state population `rho_11`.
    pub fn excited_population(&self) -> f64 {
        self.0[(0, 0)].re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.symmetric_eigen().eigenvalues.min()
    }
}

/// Two-qubit density matrix in the product basis `{|11>, |10>, |01>, |00>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState(Matrix4<Complex64>);

impl TwoQubitState {
    /// Validating constructor: Hermitian, unit trace, eigenvalues >= -1e-12.
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self, DynamicsError> {
        check_density_matrix(&matrix, matrix.symmetric_eigen().eigenvalues.min())?;
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.symmetric_eigen().eigenvalues.min()
    }

    /// Reduced state of the first qubit (trace over the second).
    pub fn reduced_first(&self) -> SingleQubitState {
        let m = &self.0;
        SingleQubitState(Matrix2::new(
            m[(0, 0)] + m[(1, 1)],
            m[(0, 2)] + m[(1, 3)],
            m[(2, 0)] + m[(3, 1)],
            m[(2, 2)] + m[(3, 3)],
        ))
    }

    /// Reduced state of the second qubit (trace over the first).
    pub fn reduced_second(&self) -> SingleQubitState {
        let m = &self.0;
        SingleQubitState(Matrix2::new(
            m[(0, 0)] + m[(2, 2)],
            m[(0, 1)] + m[(2, 3)],
            m[(1, 0)] + m[(3, 2)],
            m[(1, 1)] + m[(3, 3)],
        ))
    }
}

/// Check `|p| <= 1` within tolerance and return the amplitude with any
/// rounding excess clamped to unit modulus, together with `|p|^2` and
/// `sqrt(1 - |p|^2)`. Clamping keeps the channel exactly completely
/// positive for tolerated inputs.
fn damping_factors(p: Complex64) -> Result<(Complex64, f64, f64), DynamicsError> {
    let modulus = p.norm();
    if modulus > 1.0 + AMPLITUDE_TOL {
        return Err(DynamicsError::AmplitudeOutOfRange { modulus });
    }
    let p = if modulus > 1.0 { p / modulus } else { p };
    let psq = (modulus * modulus).min(1.0);
    Ok((p, psq, (1.0 - psq).sqrt()))
}

/// Evolve one qubit: `rho_11 -> rho_11 |p|^2`, `rho_10 -> rho_10 p`, the
/// ground population taking up the remainder. Identity at `p = 1`; full
/// decay to `|0><0|` at `p = 0`.
pub fn single_qubit_map(
    rho0: &SingleQubitState,
    p: Complex64,
) -> Result<SingleQubitState, DynamicsError> {
    let (p, psq, _) = damping_factors(p)?;
    let m = rho0.matrix();
    let pop = m[(0, 0)] * psq;
    let coh = m[(0, 1)] * p;
    Ok(SingleQubitState(Matrix2::new(
        pop,
        coh,
        coh.conj(),
        Complex64::new(1.0, 0.0) - pop,
    )))
}

/// Kraus operators of the single-qubit channel in the `{|1>, |0>}` basis.
fn kraus_pair(p: Complex64, decay: f64) -> [Matrix2<Complex64>; 2] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [
        Matrix2::new(p, zero, zero, one),
        Matrix2::new(zero, zero, Complex64::new(decay, 0.0), zero),
    ]
}

/// Evolve a two-qubit state under the product channel: each qubit is fed
/// through [`single_qubit_map`] with the same amplitude `p`,
/// `rho -> sum_ij (E_i (x) E_j) rho (E_i (x) E_j)^dag`.
///
/// The partial trace of the output over either qubit equals
/// [`single_qubit_map`] applied to the corresponding reduced input.
pub fn two_qubit_evolve(
    rho0: &TwoQubitState,
    p: Complex64,
) -> Result<TwoQubitState, DynamicsError> {
    let (p, _, decay) = damping_factors(p)?;
    let kraus = kraus_pair(p, decay);
    let mut out = Matrix4::<Complex64>::zeros();
    for ei in &kraus {
        for ej in &kraus {
            let k = ei.kronecker(ej);
            out += k * rho0.matrix() * k.adjoint();
        }
    }
    TwoQubitState::new(out)
}

/// Time series of the decay rate `Gamma(t)`, Lamb shift `Omega(t)`, and
/// normalized rate `gamma(t) = Gamma(t) / max_k Gamma(t_k)`, extracted from
/// an amplitude trajectory by finite differences.
///
/// Entries are `None` where `|p|` is too small for the rate to be defined
/// (below 1e-12); they are masked, not fabricated. The normalization uses
/// the maximum of the signed rate over the whole window, so `gamma` peaks
/// at exactly 1 and may dip negative.
#[derive(Debug, Clone)]
pub struct DecayProfile {
    times: Vec<f64>,
    gamma_raw: Vec<Option<f64>>,
    lamb: Vec<Option<f64>>,
    gamma_norm: Vec<Option<f64>>,
    gamma_max: f64,
}

impl DecayProfile {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `Gamma(t_k)` in units of `omega_0`.
    pub fn gamma_raw(&self) -> &[Option<f64>] {
        &self.gamma_raw
    }

    /// Lamb shift `Omega(t_k)` in units of `omega_0`.
    pub fn lamb(&self) -> &[Option<f64>] {
        &self.lamb
    }

    /// `gamma(t_k) = Gamma(t_k) / Gamma_max`, dimensionless.
    pub fn gamma_norm(&self) -> &[Option<f64>] {
        &self.gamma_norm
    }

    /// The normalization constant `Gamma_max = max_k Gamma(t_k)`.
    pub fn gamma_max(&self) -> f64 {
        self.gamma_max
    }
}

/// Derivative of the samples by central differences, second-order one-sided
/// at the two endpoints.
fn differentiate(values: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut d = Vec::with_capacity(n);
    d.push((-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt));
    for k in 1..n - 1 {
        d.push((values[k + 1] - values[k - 1]) / (2.0 * dt));
    }
    d.push((3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt));
    d
}

/// Extract `Gamma(t) = -2 Re[pdot/p]` and `Omega(t) = -2 Im[pdot/p]` from a
/// trajectory, with `pdot` from finite differences, and normalize `Gamma`
/// by its maximum over the full window.
pub fn decay_profile(traj: &AmplitudeTrajectory) -> Result<DecayProfile, DynamicsError> {
    let values = traj.values();
    if values.len() < 3 {
        return Err(DynamicsError::TrajectoryTooShort { len: values.len() });
    }
    let pdot = differentiate(values, traj.dt());

    let mut gamma_raw = Vec::with_capacity(values.len());
    let mut lamb = Vec::with_capacity(values.len());
    for (p, d) in values.iter().zip(&pdot) {
        if p.norm() > EPS_P {
            let ratio = d / p;
            gamma_raw.push(Some(-2.0 * ratio.re));
            lamb.push(Some(-2.0 * ratio.im));
        } else {
            gamma_raw.push(None);
            lamb.push(None);
        }
    }

    let gamma_max = gamma_raw
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !gamma_max.is_finite() || gamma_max <= 0.0 {
        return Err(DynamicsError::NonPositiveRateScale { gamma_max });
    }
    let gamma_norm = gamma_raw.iter().map(|g| g.map(|g| g / gamma_max)).collect();

    Ok(DecayProfile {
        times: traj.times().to_vec(),
        gamma_raw,
        lamb,
        gamma_norm,
        gamma_max,
    })
}
