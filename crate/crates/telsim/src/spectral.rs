//! Reservoir spectral densities, their memory kernels, and bound-state
//! thresholds.
//!
//! The family is `J(omega) = eta * omega^s * omega_c^(1-s) * exp(-omega/omega_c)`
//! with Ohmicity exponent `s`: sub-Ohmic for `s < 1`, Ohmic for `s = 1`,
//! super-Ohmic for `s > 1`. Closed-form kernels exist for `s = 1/2` and
//! positive integer `s`, which is why [`Ohmicity`] is a closed discriminant
//! rather than a free float.

use num_complex::Complex64;
use thiserror::Error;

/// Errors from constructing or evaluating spectral quantities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("Ohmicity exponent must be 1/2 or a positive integer, got integer 0")]
    InvalidExponent,
    #[error("spectral density is defined for omega >= 0, got {0}")]
    NegativeFrequency(f64),
    #[error("memory kernel is defined for tau >= 0, got {0}")]
    NegativeDelay(f64),
}

/// Ohmicity exponent of the reservoir.
///
/// Only the two cases with closed-form kernels are representable: `s = 1/2`
/// and `s = n` for a positive integer `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ohmicity {
    /// Sub-Ohmic exponent `s = 1/2`.
    Half,
    /// Integer exponent `s = n >= 1`: Ohmic for `n = 1`, super-Ohmic above.
    Integer(u32),
}

impl Ohmicity {
    /// Exponent as a float, for evaluating `omega^s`.
    pub fn as_f64(self) -> f64 {
        match self {
            Ohmicity::Half => 0.5,
            Ohmicity::Integer(n) => f64::from(n),
        }
    }
}

impl std::fmt::Display for Ohmicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ohmicity::Half => write!(f, "1/2"),
            Ohmicity::Integer(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for Ohmicity {
    type Err = String;

    /// Accepts `1/2`, `0.5`, `half`, or a positive integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1/2" | "0.5" | ".5" | "half" => Ok(Ohmicity::Half),
            other => match other.parse::<u32>() {
                Ok(n) if n >= 1 => Ok(Ohmicity::Integer(n)),
                _ => Err(format!(
                    "invalid Ohmicity exponent {other:?} (expected 1/2 or a positive integer)"
                )),
            },
        }
    }
}

/// Reservoir family descriptor: exponent, coupling, cutoff, qubit frequency.
///
/// All frequencies are in units of the qubit Bohr frequency `omega_0`, which
/// defaults to 1 so times come out in units of `1/omega_0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    s: Ohmicity,
    eta: f64,
    omega_c: f64,
    omega_0: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<f64, SpectralError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(SpectralError::NonPositive { name, value })
    }
}

/// `n!` in f64.
fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl SpectralParams {
    /// Validated constructor. `eta`, `omega_c` and `omega_0` must be positive
    /// and finite; an integer exponent must be at least 1.
    pub fn new(s: Ohmicity, eta: f64, omega_c: f64, omega_0: f64) -> Result<Self, SpectralError> {
        if s == Ohmicity::Integer(0) {
            return Err(SpectralError::InvalidExponent);
        }
        Ok(Self {
            s,
            eta: check_positive("eta", eta)?,
            omega_c: check_positive("omega_c", omega_c)?,
            omega_0: check_positive("omega_0", omega_0)?,
        })
    }

    pub fn s(&self) -> Ohmicity {
        self.s
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn omega_0(&self) -> f64 {
        self.omega_0
    }

    /// Spectral density `J(omega) = eta * omega^s * omega_c^(1-s) * e^(-omega/omega_c)`.
    ///
    /// Nonnegative for all `omega >= 0` and vanishing as `omega -> inf`.
    pub fn j_omega(&self, omega: f64) -> Result<f64, SpectralError> {
        if omega.is_nan() || omega < 0.0 {
            return Err(SpectralError::NegativeFrequency(omega));
        }
        let s = self.s.as_f64();
        Ok(self.eta * omega.powf(s) * self.omega_c.powf(1.0 - s) * (-omega / self.omega_c).exp())
    }

    /// Memory kernel `f(tau)`, the Fourier transform of `J`:
    /// `f(tau) = integral J(omega) e^(-i omega tau) d omega`, in closed form.
    ///
    /// For integer `s`: `s! * eta * omega_c^2 / (1 + i omega_c tau)^(s+1)`.
    /// For `s = 1/2`: `(sqrt(pi)/2) * eta * omega_c^2 * e^(-i varpi)
    /// / (1 + omega_c^2 tau^2)^(3/4)` with `varpi = (3/2) atan(omega_c tau)`.
    ///
    /// `|f(tau)|` is monotonically decreasing in `tau`.
    pub fn kernel(&self, tau: f64) -> Result<Complex64, SpectralError> {
        if tau.is_nan() || tau < 0.0 {
            return Err(SpectralError::NegativeDelay(tau));
        }
        let wc = self.omega_c;
        let scale = self.eta * wc * wc;
        match self.s {
            Ohmicity::Integer(n) => {
                let denom = Complex64::new(1.0, wc * tau).powu(n + 1);
                Ok(factorial(n) * scale / denom)
            }
            Ohmicity::Half => {
                let varpi = 1.5 * (wc * tau).atan();
                let modulus = 0.5 * std::f64::consts::PI.sqrt() * scale
                    / (1.0 + wc * wc * tau * tau).powf(0.75);
                Ok(Complex64::from_polar(modulus, -varpi))
            }
        }
    }

    /// Critical coupling `eta_c` above which the qubit-reservoir Hamiltonian
    /// has a bound state below the continuum, so `|p(t)|` no longer decays
    /// to zero.
    ///
    /// `eta_c = omega_0 / ((s-1)! omega_c)` for integer `s`, and
    /// `omega_0 / (sqrt(pi) omega_c)` for `s = 1/2`. The value of `eta`
    /// stored in `self` plays no role here.
    pub fn bound_state_threshold(&self) -> f64 {
        match self.s {
            Ohmicity::Integer(n) => self.omega_0 / (factorial(n - 1) * self.omega_c),
            Ohmicity::Half => self.omega_0 / (std::f64::consts::PI.sqrt() * self.omega_c),
        }
    }

    /// Whether `eta` exceeds the bound-state threshold.
    pub fn has_bound_state(&self) -> bool {
        self.eta > self.bound_state_threshold()
    }
}
