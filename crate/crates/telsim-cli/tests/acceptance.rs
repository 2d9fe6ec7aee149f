//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured values before asserting at the stated tolerance.
//!
//! Criteria 3 and 5 are asserted exactly as stated even though parts of
//! them sit outside what the physics delivers (see the per-leg output for
//! the measured values): near threshold the population plateau neither
//! clears 0.05 for the shallow sub-Ohmic bound state nor falls below 0.01
//! for the slow super-Ohmic quasi-bound resonance by `omega_0 t = 200`,
//! and the finite-difference rate identity at the preset step exceeds
//! 1e-3 of the rate scale inside the deep sub-Ohmic population dip. Those
//! legs fail honestly rather than being tuned around.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;
use telsim::dynamics::{decay_profile, two_qubit_evolve};
use telsim::fidelity::{
    critical_p_squared, f_avg, f_avg_closed_form, n_closed_form, n_of_rho, werner_state,
    WernerParams,
};
use telsim::spectral::{Ohmicity, SpectralParams};
use telsim::volterra::{oracle_p_discrete, solve_p, AmplitudeTrajectory};
use telsim_cli::config::{resolve, Overrides, Preset};
use telsim_cli::pipeline::run_scenario;

fn params(s: Ohmicity, eta: f64) -> SpectralParams {
    SpectralParams::new(s, eta, 1.0, 1.0).unwrap()
}

/// The three figure families: (label, s, caption couplings).
const PRESET_FAMILIES: [(&str, Ohmicity, [f64; 3]); 3] = [
    ("fig2 s=3", Ohmicity::Integer(3), [0.15, 0.35, 0.9]),
    ("fig3 s=1", Ohmicity::Integer(1), [0.3, 0.9, 2.7]),
    ("fig4 s=1/2", Ohmicity::Half, [0.3, 0.55, 2.1]),
];

fn report(number: u32, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("acceptance criterion {number} ({name}): PASS");
    } else {
        println!(
            "acceptance criterion {number} ({name}): FAIL\n    {}",
            failures.join("\n    ")
        );
    }
    assert!(
        failures.is_empty(),
        "criterion {number} failed:\n{}",
        failures.join("\n")
    );
}

#[test]
fn criterion_1_closed_form_consistency() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut max_dev = 0.0f64;
    for r in [0.0, 0.3, 1.0 / 3.0, 0.5, 0.9, 1.0] {
        let werner = WernerParams::new(r).unwrap();
        let rho0 = werner_state(&werner);
        for k in 0..=10 {
            let modulus = k as f64 / 10.0;
            for phase in [0.0, PI / 3.0, PI / 2.0] {
                let p = Complex64::from_polar(modulus, phase);
                let pipeline = n_of_rho(&two_qubit_evolve(&rho0, p).unwrap()).unwrap();
                let closed = n_closed_form(&werner, modulus).unwrap();
                let dev = (pipeline - closed).abs();
                max_dev = max_dev.max(dev);
                if dev > 1e-10 {
                    failures.push(format!(
                        "r={r} |p|={modulus} phase={phase}: |N_pipeline - N_closed| = {dev:.3e} > 1e-10"
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 1 s"));
    }
    println!("  max |N_pipeline - N_closed| = {max_dev:.3e}, runtime {elapsed:?}");
    report(1, "closed-form consistency", &failures);
}

#[test]
fn criterion_2_fig1_structure() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let n = 10_000usize;
    let dq = 1.0 / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|k| k as f64 * dq).collect();

    // Non-monotone quantum class: interior minimum at (1-r)/(1+r), and the
    // classical boundary at twice that, each within one grid step.
    for r in [0.5, 0.7] {
        let werner = WernerParams::new(r).unwrap();
        let f: Vec<f64> = grid
            .iter()
            .map(|&q| f_avg_closed_form(&werner, q.sqrt()).unwrap())
            .collect();
        let q_c = critical_p_squared(&werner);

        let argmin = f
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(k, _)| k)
            .unwrap();
        if (grid[argmin] - q_c).abs() > dq {
            failures.push(format!(
                "r={r}: minimum at q={} but critical point is {q_c} (step {dq})",
                grid[argmin]
            ));
        }

        let boundary = 2.0 * q_c;
        for (k, &q) in grid.iter().enumerate() {
            if q < boundary - dq && f[k] > 2.0 / 3.0 + 1e-12 {
                failures.push(format!(
                    "r={r}: F_av > 2/3 at q={q} below the boundary {boundary}"
                ));
                break;
            }
            if q > boundary + dq && f[k] <= 2.0 / 3.0 {
                failures.push(format!(
                    "r={r}: F_av <= 2/3 at q={q} above the boundary {boundary}"
                ));
                break;
            }
        }
    }

    // Classical class: never above 2/3.
    for r in [0.2, 1.0 / 3.0] {
        let werner = WernerParams::new(r).unwrap();
        let max = grid
            .iter()
            .map(|&q| f_avg_closed_form(&werner, q.sqrt()).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        if max > 2.0 / 3.0 + 1e-12 {
            failures.push(format!("r={r}: max F_av = {max} exceeds 2/3 + 1e-12"));
        }
    }

    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 1 s"));
    }
    println!("  fig1 structure checked on a {n}-point population grid, runtime {elapsed:?}");
    report(2, "fig1 structure", &failures);
}

#[test]
fn criterion_3_bound_state_dichotomy() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let expected_thresholds = [
        (Ohmicity::Integer(3), 0.5),
        (Ohmicity::Integer(1), 1.0),
        (Ohmicity::Half, 0.5642),
    ];
    for (s, expected) in expected_thresholds {
        let eta_c = params(s, 1.0).bound_state_threshold();
        println!("  s={s}: eta_c = {eta_c:.6} (expected {expected})");
        if (eta_c - expected).abs() > 5e-5 {
            failures.push(format!("s={s}: eta_c = {eta_c} differs from {expected}"));
        }

        let plateau = |eta: f64| -> f64 {
            solve_p(&params(s, eta), 200.0, 0.01)
                .unwrap()
                .tail_population_mean(0.1)
        };
        let above = plateau(1.1 * eta_c);
        let below = plateau(0.9 * eta_c);
        println!(
            "  s={s}: tail mean |p|^2 = {above:.4} at 1.1 eta_c (need > 0.05), {below:.6} at 0.9 eta_c (need < 0.01)"
        );
        if above <= 0.05 {
            failures.push(format!(
                "s={s}: plateau {above:.4} at 1.1 eta_c not above 0.05"
            ));
        }
        if below >= 0.01 {
            failures.push(format!(
                "s={s}: plateau {below:.4} at 0.9 eta_c not below 0.01"
            ));
        }
    }

    // Fig. 2 preset consequences (r = 1, through the full pipeline).
    let bell = werner_state(&WernerParams::new(1.0).unwrap());
    let strong = solve_p(&params(Ohmicity::Integer(3), 0.9), 50.0, 0.005).unwrap();
    let p_end = *strong.values().last().unwrap();
    let f_strong = f_avg(&two_qubit_evolve(&bell, p_end / p_end.norm().max(1.0)).unwrap()).unwrap();
    println!("  fig2 eta=0.9: F_av(50) = {f_strong:.6} (need >= 2/3 + 0.01)");
    if f_strong - 2.0 / 3.0 < 0.01 {
        failures.push(format!(
            "fig2 eta=0.9: F_av(50) = {f_strong} within 0.01 of 2/3"
        ));
    }

    let weak = solve_p(&params(Ohmicity::Integer(3), 0.15), 200.0, 0.01).unwrap();
    let p_end = *weak.values().last().unwrap();
    let f_weak = f_avg(&two_qubit_evolve(&bell, p_end / p_end.norm().max(1.0)).unwrap()).unwrap();
    println!("  fig2 eta=0.15: F_av(200) = {f_weak:.6} (need within 0.05 of 2/3)");
    if (f_weak - 2.0 / 3.0).abs() > 0.05 {
        failures.push(format!(
            "fig2 eta=0.15: F_av(200) = {f_weak} not within 0.05 of 2/3"
        ));
    }

    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 120.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 2 min"));
    }
    println!("  runtime {elapsed:?}");
    report(3, "bound-state dichotomy", &failures);
}

#[test]
fn criterion_4_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (s, eta) in [
        (Ohmicity::Integer(3), 0.9),
        (Ohmicity::Integer(1), 0.3),
        (Ohmicity::Half, 0.55),
    ] {
        let p = params(s, eta);
        let solver = solve_p(&p, 20.0, 0.005).unwrap();
        let oracle = oracle_p_discrete(&p, 2000, 20.0 * p.omega_c(), 20.0, 0.005).unwrap();
        let max_dev = solver
            .values()
            .iter()
            .zip(oracle.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!("  s={s} eta={eta}: max |p_solver - p_oracle| = {max_dev:.3e} (tolerance 5e-3)");
        if max_dev > 5e-3 {
            failures.push(format!("s={s} eta={eta}: deviation {max_dev:.3e} > 5e-3"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 1 min"));
    }
    println!("  runtime {elapsed:?}");
    report(4, "oracle equivalence", &failures);
}

/// Central second-order finite difference, one-sided at the ends (the same
/// stencil the rate extraction uses).
fn differentiate(values: &[f64], dt: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = Vec::with_capacity(n);
    d.push((-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt));
    for k in 1..n - 1 {
        d.push((values[k + 1] - values[k - 1]) / (2.0 * dt));
    }
    d.push((3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt));
    d
}

#[test]
fn criterion_5_rate_identity() {
    // Deviation between the two rate routes is measured against the
    // largest rate magnitude on the gated grid: a pointwise quotient is
    // singular wherever Gamma crosses zero, so "relative" can only mean
    // relative to the scale of the rate.
    let mut failures = Vec::new();
    for (label, s, etas) in PRESET_FAMILIES {
        for eta in etas {
            let traj = solve_p(&params(s, eta), 50.0, 0.005).unwrap();
            let profile = decay_profile(&traj).unwrap();
            let log_q: Vec<f64> = traj.values().iter().map(|p| p.norm_sqr().ln()).collect();
            let dlog = differentiate(&log_q, traj.dt());

            let mut max_dev = 0.0f64;
            let mut scale = 0.0f64;
            for (k, p) in traj.values().iter().enumerate() {
                if p.norm_sqr() > 1e-6 {
                    let a = profile.gamma_raw()[k].unwrap();
                    let b = -dlog[k];
                    max_dev = max_dev.max((a - b).abs());
                    scale = scale.max(b.abs());
                }
            }
            let rel = max_dev / scale;
            let gamma_norm_max = profile
                .gamma_norm()
                .iter()
                .flatten()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            println!(
                "  {label} eta={eta}: scaled deviation {rel:.3e} (tolerance 1e-3), max gamma = {gamma_norm_max}"
            );
            if rel > 1e-3 {
                failures.push(format!(
                    "{label} eta={eta}: scaled deviation {rel:.3e} > 1e-3"
                ));
            }
            if gamma_norm_max != 1.0 {
                failures.push(format!(
                    "{label} eta={eta}: max of normalized rate is {gamma_norm_max}, not exactly 1"
                ));
            }
        }
    }
    report(5, "rate identity", &failures);
}

#[test]
fn criterion_6_fig5_sign_law() {
    let mut failures = Vec::new();
    let traj = solve_p(&params(Ohmicity::Integer(3), 0.9), 50.0, 0.005).unwrap();
    let profile = decay_profile(&traj).unwrap();
    let gamma = profile.gamma_norm();
    let q: Vec<f64> = traj.values().iter().map(|p| p.norm_sqr()).collect();

    let fidelity_series = |r: f64| -> Vec<f64> {
        let rho0 = werner_state(&WernerParams::new(r).unwrap());
        traj.values()
            .iter()
            .map(|&p| {
                let p = if p.norm() > 1.0 { p / p.norm() } else { p };
                f_avg(&two_qubit_evolve(&rho0, p).unwrap()).unwrap()
            })
            .collect()
    };

    // r = 1: fidelity moves against the rate wherever |gamma| > 0.01.
    let f1 = fidelity_series(1.0);
    let mut gated = 0usize;
    for k in 0..q.len() - 1 {
        if let (Some(a), Some(b)) = (gamma[k], gamma[k + 1]) {
            if a.abs() > 0.01 && b.abs() > 0.01 && a.signum() == b.signum() {
                gated += 1;
                let df = f1[k + 1] - f1[k];
                if df * a >= 0.0 {
                    failures.push(format!(
                        "r=1 t={}: gamma={a:.4} but delta F_av={df:.3e}",
                        traj.times()[k]
                    ));
                }
            }
        }
    }
    println!("  r=1: sign law checked on {gated} gated grid intervals");

    // r = 0.5: inside the |p|^2 < 1/3 window the relation flips.
    let f5 = fidelity_series(0.5);
    let mut window_gated = 0usize;
    for k in 0..q.len() - 1 {
        if q[k] < 1.0 / 3.0 && q[k + 1] < 1.0 / 3.0 {
            if let (Some(a), Some(b)) = (gamma[k], gamma[k + 1]) {
                if a.abs() > 0.01 && b.abs() > 0.01 && a.signum() == b.signum() {
                    window_gated += 1;
                    let df = f5[k + 1] - f5[k];
                    if df * a <= 0.0 {
                        failures.push(format!(
                            "r=0.5 t={}: gamma={a:.4} but delta F_av={df:.3e}",
                            traj.times()[k]
                        ));
                    }
                }
            }
        }
    }
    if window_gated == 0 {
        failures.push("r=0.5: no gated grid intervals inside the |p|^2 < 1/3 window".into());
    }

    // The detected low-population window must overlap the reference
    // interval (0.49, 0.84); exact endpoints depend on solver settings.
    let below: Vec<usize> = (0..q.len()).filter(|&k| q[k] < 1.0 / 3.0).collect();
    let overlap = below
        .iter()
        .any(|&k| traj.times()[k] > 0.49 && traj.times()[k] < 0.84);
    if below.is_empty() || !overlap {
        failures.push("detected |p|^2 < 1/3 window does not overlap (0.49, 0.84)".into());
    } else {
        let first = traj.times()[below[0]];
        let last = below
            .windows(2)
            .find(|w| w[1] != w[0] + 1)
            .map_or(traj.times()[*below.last().unwrap()], |w| traj.times()[w[0]]);
        println!(
            "  r=0.5: first |p|^2 < 1/3 window [{first:.3}, {last:.3}] overlaps (0.49, 0.84); {window_gated} gated intervals inside"
        );
    }

    report(6, "fig5 sign law", &failures);
}

#[test]
fn criterion_7_solver_convergence() {
    let mut failures = Vec::new();
    for (label, s, etas) in PRESET_FAMILIES {
        for eta in etas {
            let p = params(s, eta);
            let coarse = solve_p(&p, 50.0, 0.02).unwrap();
            let medium = solve_p(&p, 50.0, 0.01).unwrap();
            let fine = solve_p(&p, 50.0, 0.005).unwrap();
            let dev = |a: &AmplitudeTrajectory, b: &AmplitudeTrajectory| -> f64 {
                let stride = ((a.dt() / b.dt()) + 0.5) as usize;
                a.values()
                    .iter()
                    .zip(b.values().iter().step_by(stride))
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max)
            };
            let ratio = dev(&coarse, &medium) / dev(&medium, &fine);
            println!("  {label} eta={eta}: step-halving ratio {ratio:.2} (need >= 3.5)");
            if ratio.is_nan() || ratio < 3.5 {
                failures.push(format!("{label} eta={eta}: ratio {ratio:.2} below 3.5"));
            }
        }
    }
    report(7, "solver convergence", &failures);
}

#[test]
fn criterion_8_determinism() {
    let mut failures = Vec::new();
    for preset in [Preset::Fig1, Preset::Fig3, Preset::Fig5] {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let run = |dir: &std::path::Path| -> Vec<(String, Vec<u8>)> {
            let config = resolve(Overrides {
                preset: Some(preset),
                out_dir: Some(dir.to_path_buf()),
                ..Default::default()
            });
            run_scenario(&config)
                .unwrap()
                .into_iter()
                .map(|path| {
                    (
                        path.file_name().unwrap().to_string_lossy().into_owned(),
                        std::fs::read(&path).unwrap(),
                    )
                })
                .collect()
        };
        let a = run(dir_a.path());
        let b = run(dir_b.path());
        if a.len() != b.len() {
            failures.push(format!("{}: file sets differ", preset.name()));
            continue;
        }
        for ((name_a, bytes_a), (name_b, bytes_b)) in a.iter().zip(&b) {
            if name_a != name_b {
                failures.push(format!("{}: {name_a} vs {name_b}", preset.name()));
            } else if bytes_a != bytes_b {
                failures.push(format!("{}: {name_a} differs between runs", preset.name()));
            }
        }
        println!(
            "  {}: {} files byte-identical across two runs",
            preset.name(),
            a.len()
        );
    }
    report(8, "determinism", &failures);
}
