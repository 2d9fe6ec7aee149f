//! Solver for the amplitude equation
//! `pdot(t) + i w0 p(t) + integral_0^t p(t1) f(t - t1) dt1 = 0`, `p(0) = 1`,
//! on a uniform grid, plus an independent discrete-mode diagonalization
//! oracle used to validate it.
//!
//! The scheme is the trapezoidal predictor-corrector: the convolution over
//! the stored history is evaluated by trapezoidal quadrature, and because
//! the corrector equation is linear in the new endpoint value it is solved
//! exactly rather than iterated. Second order in `dt`.

use crate::spectral::SpectralParams;
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Hard ceiling on the grid resolution: `dt * omega_0` must not exceed this.
pub const MAX_STEP: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VolterraError {
    #[error("time step dt = {dt} exceeds the resolution guard {limit} / omega_0")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("invalid grid: need t_max > 0 and 0 < dt <= t_max (t_max = {t_max}, dt = {dt})")]
    InvalidGrid { t_max: f64, dt: f64 },
    #[error("solver diverged: first non-finite value at grid index {index} (t = {time})")]
    Diverged { index: usize, time: f64 },
    #[error("bath discretization too coarse: need n_modes >= {min_modes} and omega_max >= {min_omega_max}")]
    BathTooCoarse {
        min_modes: usize,
        min_omega_max: f64,
    },
    #[error("invalid trajectory data: {0}")]
    InvalidTrajectory(String),
    #[error("eigendecomposition failed: {0}")]
    EigenFailure(String),
}

/// Complex amplitude `p(t)` sampled on the uniform grid `t_k = k dt`.
///
/// `p(0) = 1` always (the qubit-reservoir state is initially uncorrelated,
/// so the reduced map is the identity at `t = 0`), and `|p(t)| <= 1` up to
/// solver tolerance.
#[derive(Debug, Clone)]
pub struct AmplitudeTrajectory {
    params: SpectralParams,
    dt: f64,
    times: Vec<f64>,
    values: Vec<Complex64>,
}

impl AmplitudeTrajectory {
    /// Wrap externally produced samples. The first sample must be exactly 1
    /// and all samples finite with `|p| <= 1 + 1e-6`.
    pub fn from_values(
        params: SpectralParams,
        dt: f64,
        values: Vec<Complex64>,
    ) -> Result<Self, VolterraError> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(VolterraError::InvalidTrajectory(format!("dt = {dt}")));
        }
        if values.is_empty() {
            return Err(VolterraError::InvalidTrajectory("empty sample list".into()));
        }
        if values[0] != Complex64::new(1.0, 0.0) {
            return Err(VolterraError::InvalidTrajectory(format!(
                "p(0) = {} but must be exactly 1",
                values[0]
            )));
        }
        for (k, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(VolterraError::Diverged {
                    index: k,
                    time: k as f64 * dt,
                });
            }
            if v.norm() > 1.0 + 1e-6 {
                return Err(VolterraError::InvalidTrajectory(format!(
                    "|p(t_{k})| = {} exceeds 1 beyond tolerance",
                    v.norm()
                )));
            }
        }
        let times = (0..values.len()).map(|k| k as f64 * dt).collect();
        Ok(Self {
            params,
            dt,
            times,
            values,
        })
    }

    pub fn params(&self) -> &SpectralParams {
        &self.params
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Grid times `t_k = k dt`, in units of `1/omega_0`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Number of grid points (including `t = 0`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `|p(t_k)|^2` for every grid point.
    pub fn populations(&self) -> Vec<f64> {
        self.values.iter().map(|p| p.norm_sqr()).collect()
    }

    /// Mean of `|p|^2` over the final `fraction` of the grid. Used for
    /// plateau detection: insensitive to residual oscillation phase.
    pub fn tail_population_mean(&self, fraction: f64) -> f64 {
        let n = self.values.len();
        let start = ((1.0 - fraction.clamp(0.0, 1.0)) * n as f64).floor() as usize;
        let tail = &self.values[start.min(n - 1)..];
        tail.iter().map(|p| p.norm_sqr()).sum::<f64>() / tail.len() as f64
    }
}

/// Number of steps covering `[0, t_max]` with spacing `dt` (grid has
/// `steps + 1` points). Tolerates `t_max/dt` being marginally below an
/// integer from rounding.
fn step_count(t_max: f64, dt: f64) -> usize {
    ((t_max / dt) - 1e-9).ceil().max(1.0) as usize
}

fn grid_is_valid(t_max: f64, dt: f64) -> bool {
    t_max.is_finite() && dt.is_finite() && t_max > 0.0 && dt > 0.0 && dt <= t_max
}

/// Solve the amplitude equation on `t in [0, t_max]` with spacing `dt`.
///
/// The memory kernel is sampled once per grid offset from
/// [`SpectralParams::kernel`]; each step then costs one pass over the
/// stored history (`O(K^2)` total, which finishes in seconds for the
/// `K ~ 10^4` grids used here).
pub fn solve_p(
    params: &SpectralParams,
    t_max: f64,
    dt: f64,
) -> Result<AmplitudeTrajectory, VolterraError> {
    if !grid_is_valid(t_max, dt) {
        return Err(VolterraError::InvalidGrid { t_max, dt });
    }
    if dt * params.omega_0() > MAX_STEP {
        return Err(VolterraError::StepTooLarge {
            dt,
            limit: MAX_STEP,
        });
    }

    let steps = step_count(t_max, dt);
    let kernel: Vec<Complex64> = (0..=steps)
        .map(|j| params.kernel(j as f64 * dt).expect("nonnegative delay"))
        .collect();

    let i_w0 = Complex64::new(0.0, params.omega_0());
    let half_dt = 0.5 * dt;
    // Implicit trapezoidal step: the corrector fixed point is linear in the
    // new endpoint, p_new * (1 + dt/2 (i w0 + dt/2 f(0))) = rhs.
    let denom = 1.0 + half_dt * (i_w0 + half_dt * kernel[0]);

    let mut p = Vec::with_capacity(steps + 1);
    let mut deriv = Vec::with_capacity(steps + 1);
    p.push(Complex64::new(1.0, 0.0));
    deriv.push(-i_w0); // convolution vanishes at t = 0

    for k in 0..steps {
        // Trapezoidal history sum at t_{k+1} excluding the (unknown) endpoint:
        // S = dt * (f_{k+1} p_0 / 2 + sum_{j=1..k} f_{k+1-j} p_j).
        let mut s = 0.5 * kernel[k + 1] * p[0];
        for (f, pj) in kernel[1..=k].iter().rev().zip(&p[1..=k]) {
            s += f * pj;
        }
        s *= dt;

        let p_next = (p[k] + half_dt * (deriv[k] - s)) / denom;
        if !p_next.re.is_finite() || !p_next.im.is_finite() {
            return Err(VolterraError::Diverged {
                index: k + 1,
                time: (k + 1) as f64 * dt,
            });
        }
        let conv = s + half_dt * kernel[0] * p_next;
        deriv.push(-(i_w0 * p_next + conv));
        p.push(p_next);
    }

    let times = (0..=steps).map(|k| k as f64 * dt).collect();
    Ok(AmplitudeTrajectory {
        params: *params,
        dt,
        times,
        values: p,
    })
}

/// Reservoir modes for the discrete oracle: `n_modes` frequencies equally
/// spaced on `(0, omega_max]` with couplings `g_k = sqrt(J(omega_k) d_omega)`.
fn bath_modes(params: &SpectralParams, n_modes: usize, omega_max: f64) -> Vec<(f64, f64)> {
    let d_omega = omega_max / n_modes as f64;
    (1..=n_modes)
        .map(|k| {
            let omega = k as f64 * d_omega;
            let j = params.j_omega(omega).expect("positive frequency");
            (omega, (j * d_omega).sqrt())
        })
        .collect()
}

/// Single-excitation Hamiltonian of one qubit plus discretized bath:
/// arrowhead matrix with diagonal `(omega_0, omega_1, ..)` and the qubit
/// coupled to mode `k` with strength `g_k` in the first row/column.
///
/// [`arrowhead_eigen`] diagonalizes this shape without materializing it;
/// the dense form is for inspection and cross-checks.
pub fn single_excitation_hamiltonian(omega_0: f64, modes: &[(f64, f64)]) -> DMatrix<f64> {
    let n = modes.len() + 1;
    let mut h = DMatrix::zeros(n, n);
    h[(0, 0)] = omega_0;
    for (k, &(omega, g)) in modes.iter().enumerate() {
        h[(k + 1, k + 1)] = omega;
        h[(0, k + 1)] = g;
        h[(k + 1, 0)] = g;
    }
    h
}

/// Survival amplitude `<e| exp(-i H t) |e>` of the first basis vector from
/// an eigendecomposition: `p(t) = sum_j w_j exp(-i lambda_j t)` with
/// `w_j = |<e|v_j>|^2`.
pub fn survival_amplitude(eig: &ArrowheadEigen, times: &[f64]) -> Vec<Complex64> {
    phase_sum(&eig.eigenvalues, &eig.head_weights, times)
}

fn phase_sum(eigenvalues: &[f64], weights: &[f64], times: &[f64]) -> Vec<Complex64> {
    times
        .iter()
        .map(|&t| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, lambda) in weights.iter().zip(eigenvalues) {
                acc += w * Complex64::from_polar(1.0, -lambda * t);
            }
            acc
        })
        .collect()
}

/// Eigenvalues and squared head components of the eigenvectors of the
/// arrowhead matrix with head diagonal `head`, tail diagonal `d_k`, and
/// head-tail couplings `b_k` (the single-excitation Hamiltonian shape).
#[derive(Debug, Clone)]
pub struct ArrowheadEigen {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// `|<e|v_j>|^2` for each eigenvalue; sums to 1.
    pub head_weights: Vec<f64>,
}

/// Eigendecomposition of an arrowhead matrix via its secular equation
/// `head - lambda = sum_k b_k^2 / (d_k - lambda)`.
///
/// The secular function is strictly decreasing between consecutive poles
/// `d_k`, so exactly one eigenvalue lies in each gap plus one below and one
/// above the tail spectrum; each is found by bisection. The squared head
/// component is `1 / (1 + sum_k b_k^2/(d_k - lambda)^2)`.
///
/// `modes` must be sorted by frequency with no duplicates (as produced by
/// a uniform bath discretization). Modes with zero coupling are decoupled
/// exactly and carry no head weight.
pub fn arrowhead_eigen(head: f64, modes: &[(f64, f64)]) -> Result<ArrowheadEigen, VolterraError> {
    let coupled: Vec<(f64, f64)> = modes.iter().copied().filter(|&(_, g)| g != 0.0).collect();
    if coupled.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(VolterraError::EigenFailure(
            "mode frequencies must be strictly increasing".into(),
        ));
    }

    let secular = |lambda: f64| -> f64 {
        let mut acc = head - lambda;
        for &(d, g) in &coupled {
            acc -= g * g / (d - lambda);
        }
        acc
    };

    // All eigenvalues lie within the coupling-norm enlargement of the
    // diagonal range.
    let norm_b = coupled.iter().map(|&(_, g)| g * g).sum::<f64>().sqrt();
    let (lo_bound, hi_bound) = match (coupled.first(), coupled.last()) {
        (Some(&(d_first, _)), Some(&(d_last, _))) => (
            head.min(d_first) - norm_b - 1.0,
            head.max(d_last) + norm_b + 1.0,
        ),
        _ => (head, head),
    };

    // Bracket each root: the secular function falls from +inf to -inf on
    // every open interval between poles, and from finite/+inf to -inf on
    // the two outer intervals.
    let mut eigenvalues = Vec::with_capacity(coupled.len() + 1);
    let mut brackets: Vec<(f64, f64)> = Vec::with_capacity(coupled.len() + 1);
    if coupled.is_empty() {
        eigenvalues.push(head);
    } else {
        let poles: Vec<f64> = coupled.iter().map(|&(d, _)| d).collect();
        brackets.push((lo_bound, poles[0]));
        for w in poles.windows(2) {
            brackets.push((w[0], w[1]));
        }
        brackets.push((*poles.last().unwrap(), hi_bound));

        for (k, &(a, b)) in brackets.iter().enumerate() {
            // Keep strictly inside the bracket; the endpoints are poles
            // (except the outermost bounds, where the function is finite).
            let pad = 1e-14 * (b - a).abs().max(1.0);
            let mut lo = if k == 0 { a } else { a + pad };
            let mut hi = if k == brackets.len() - 1 { b } else { b - pad };
            if lo >= hi {
                // Root squeezed against a pole: weight is negligible.
                eigenvalues.push(0.5 * (a + b));
                continue;
            }
            // Padding may overshoot a root lying within `pad` of a pole; the
            // sign convention below still converges onto the pole, which is
            // the correct limit to machine precision.
            for _ in 0..120 {
                let mid = 0.5 * (lo + hi);
                if secular(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
                    break;
                }
            }
            eigenvalues.push(0.5 * (lo + hi));
        }
    }

    let head_weights: Vec<f64> = eigenvalues
        .iter()
        .map(|&lambda| {
            let mut s = 1.0;
            for &(d, g) in &coupled {
                let gap = d - lambda;
                s += (g / gap) * (g / gap);
            }
            1.0 / s
        })
        .collect();

    let total: f64 = head_weights.iter().sum();
    if !(total - 1.0).abs().is_finite() || (total - 1.0).abs() > 1e-8 {
        return Err(VolterraError::EigenFailure(format!(
            "head weights sum to {total}, expected 1"
        )));
    }
    Ok(ArrowheadEigen {
        eigenvalues,
        head_weights,
    })
}

/// Independent oracle for [`solve_p`]: simulate the qubit plus a bath of
/// `n_modes` discrete modes exactly in the single-excitation sector.
///
/// Converges to the continuum result as `n_modes` and `omega_max` grow; the
/// finite mode spacing makes it reliable only for `t` well below the
/// recurrence time `2 pi n_modes / omega_max`.
pub fn oracle_p_discrete(
    params: &SpectralParams,
    n_modes: usize,
    omega_max: f64,
    t_max: f64,
    dt: f64,
) -> Result<AmplitudeTrajectory, VolterraError> {
    if n_modes < 100 || omega_max < 10.0 * params.omega_c() {
        return Err(VolterraError::BathTooCoarse {
            min_modes: 100,
            min_omega_max: 10.0 * params.omega_c(),
        });
    }
    if !grid_is_valid(t_max, dt) {
        return Err(VolterraError::InvalidGrid { t_max, dt });
    }
    let steps = step_count(t_max, dt);
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let eig = arrowhead_eigen(params.omega_0(), &bath_modes(params, n_modes, omega_max))?;
    let values = phase_sum(&eig.eigenvalues, &eig.head_weights, &times);
    for (k, v) in values.iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(VolterraError::Diverged {
                index: k,
                time: times[k],
            });
        }
    }
    Ok(AmplitudeTrajectory {
        params: *params,
        dt,
        times,
        values,
    })
}
