//! Bloch correlation tensor, the trace-norm functional `N(rho)`, and the
//! maximal average teleportation fidelity `F_av = 1/2 + N/6`.
//!
//! With Bell measurements on the sender's side and arbitrary unitary
//! corrections on the receiver's, a two-qubit channel `rho` teleports an
//! unknown qubit with average fidelity `1/2 + N(rho)/6`, where `N` is the
//! trace norm of the 3x3 Pauli correlation block. `F_av > 2/3` certifies
//! an advantage over the best classical strategy.
//!
//! For Werner-like channels `r |Psi><Psi| + (1-r)/4 I` evolved through the
//! product amplitude-damping channel, `N` depends on the amplitude only
//! through `|p|`:
//! `N = (r+1)|p|^4 + 2(r-1)|p|^2 + 1`, minimized at
//! `|p|^2 = (1-r)/(1+r)`, with `F_av > 2/3` exactly on
//! `|p|^2 > 2(1-r)/(1+r)`.

use crate::dynamics::TwoQubitState;
use nalgebra::{Matrix2, Matrix3, Matrix4};
use num_complex::Complex64;
use thiserror::Error;

/// Imaginary residue allowed in the Pauli expectation values of a Hermitian
/// unit-trace matrix before the entries are taken real.
const IMAG_RESIDUE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FidelityError {
    #[error("mixing parameter must lie in [0, 1], got {0}")]
    MixingOutOfRange(f64),
    #[error("amplitude modulus must lie in [0, 1], got {0}")]
    AmplitudeOutOfRange(f64),
    #[error("Pauli correlation has imaginary residue {max_imag} beyond tolerance")]
    ComplexResidue { max_imag: f64 },
    #[error("Pauli correlation entry {value} outside [-1, 1]")]
    EntryOutOfRange { value: f64 },
    #[error(transparent)]
    State(#[from] crate::dynamics::DynamicsError),
}

/// Mixing parameter of the Werner-like channel, `r in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    r: f64,
}

impl WernerParams {
    pub fn new(r: f64) -> Result<Self, FidelityError> {
        if (0.0..=1.0).contains(&r) {
            Ok(Self { r })
        } else {
            Err(FidelityError::MixingOutOfRange(r))
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Pauli matrices in the `{|1>, |0>}` basis; index 1..3 for x, y, z.
fn pauli(n: usize) -> Matrix2<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match n {
        0 => Matrix2::identity(),
        1 => Matrix2::new(zero, one, one, zero),
        2 => Matrix2::new(zero, -i, i, zero),
        3 => Matrix2::new(one, zero, zero, -one),
        _ => unreachable!("Pauli index must be 0..=3"),
    }
}

/// 3x3 real correlation matrix `t_nm = Tr(rho sigma_n (x) sigma_m)`,
/// `n, m in {1, 2, 3}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochTensor(Matrix3<f64>);

impl BlochTensor {
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// Sum of singular values, `Tr sqrt(T^dag T)`. Well-defined for any
    /// real tensor; the evolved tensor is generally not positive, so this
    /// is not a plain trace.
    pub fn singular_value_sum(&self) -> f64 {
        self.0.svd(false, false).singular_values.iter().sum()
    }
}

/// The Werner-like channel `r |Psi><Psi| + (1-r)/4 I` with
/// `|Psi> = (|00> + |11>)/sqrt(2)`. Entangled exactly when `r > 1/3`.
pub fn werner_state(params: &WernerParams) -> TwoQubitState {
    let r = params.r;
    let mut m = Matrix4::<Complex64>::identity() * Complex64::new((1.0 - r) / 4.0, 0.0);
    let half_r = Complex64::new(r / 2.0, 0.0);
    // |Psi><Psi| projects onto (e0 + e3)/sqrt(2) in {|11>,|10>,|01>,|00>}.
    m[(0, 0)] += half_r;
    m[(0, 3)] += half_r;
    m[(3, 0)] += half_r;
    m[(3, 3)] += half_r;
    TwoQubitState::new(m).expect("Werner matrix is a valid state for r in [0, 1]")
}

/// Pauli expectation `Tr(rho sigma_n (x) sigma_m)` for `n, m in 0..=3`.
fn pauli_correlation(rho: &TwoQubitState, n: usize, m: usize) -> Complex64 {
    let op = pauli(n).kronecker(&pauli(m));
    (op * rho.matrix()).trace()
}

/// Extract the 3x3 Bloch correlation block of a two-qubit state.
///
/// Entries of a Hermitian unit-trace input are real up to rounding; an
/// imaginary residue beyond 1e-12 (or an entry outside `[-1, 1]`) is
/// reported as an error rather than silently discarded.
pub fn bloch_tensor(rho: &TwoQubitState) -> Result<BlochTensor, FidelityError> {
    let mut t = Matrix3::zeros();
    for n in 1..=3 {
        for m in 1..=3 {
            let value = pauli_correlation(rho, n, m);
            if value.im.abs() > IMAG_RESIDUE_TOL {
                return Err(FidelityError::ComplexResidue {
                    max_imag: value.im.abs(),
                });
            }
            if value.re.abs() > 1.0 + 1e-9 {
                return Err(FidelityError::EntryOutOfRange { value: value.re });
            }
            t[(n - 1, m - 1)] = value.re;
        }
    }
    Ok(BlochTensor(t))
}

/// `N(rho) = Tr sqrt(T^dag T)`, the singular-value sum of the Bloch
/// tensor. Ranges over `[0, 3]`.
pub fn n_of_rho(rho: &TwoQubitState) -> Result<f64, FidelityError> {
    Ok(bloch_tensor(rho)?.singular_value_sum())
}

/// Maximal average teleportation fidelity `F_av = 1/2 + N(rho)/6`, in
/// `[1/2, 1]`.
pub fn f_avg(rho: &TwoQubitState) -> Result<f64, FidelityError> {
    Ok(0.5 + n_of_rho(rho)? / 6.0)
}

/// Closed form of `N` for a Werner-like channel evolved to amplitude
/// modulus `|p|`: `(r+1)|p|^4 + 2(r-1)|p|^2 + 1`.
///
/// Moduli exceeding 1 by no more than 1e-9 (solver rounding) are clamped.
pub fn n_closed_form(params: &WernerParams, p_abs: f64) -> Result<f64, FidelityError> {
    if !(0.0..=1.0 + 1e-9).contains(&p_abs) {
        return Err(FidelityError::AmplitudeOutOfRange(p_abs));
    }
    let q = (p_abs * p_abs).min(1.0);
    let r = params.r;
    Ok((r + 1.0) * q * q + 2.0 * (r - 1.0) * q + 1.0)
}

/// Closed form of the average fidelity for a Werner-like channel at
/// amplitude modulus `|p|`.
pub fn f_avg_closed_form(params: &WernerParams, p_abs: f64) -> Result<f64, FidelityError> {
    Ok(0.5 + n_closed_form(params, p_abs)? / 6.0)
}

/// The population `|p|^2` at which the closed-form fidelity is minimal:
/// `(1-r)/(1+r)`.
///
/// `F_av` decreases on `|p|^2 < (1-r)/(1+r)` and increases above it, and
/// exceeds 2/3 exactly on `|p|^2 > 2(1-r)/(1+r)`; for `r <= 1/3` that bound
/// is at least 1, so the fidelity never beats the classical value.
pub fn critical_p_squared(params: &WernerParams) -> f64 {
    (1.0 - params.r) / (1.0 + params.r)
}
