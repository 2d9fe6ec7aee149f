//! Scenario execution: solve the amplitude equation for each coupling,
//! push the Werner channel through the product map, and write CSV data
//! plus SVG figures.

use crate::config::{fmt_param, Preset, ScenarioConfig, P_GRID_POINTS};
use crate::csv::render_csv;
use crate::svg::{render_figure, Panel, Series, PALETTE};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use telsim::dynamics::{decay_profile, two_qubit_evolve, DecayProfile};
use telsim::fidelity::{f_avg, f_avg_closed_form, werner_state, WernerParams};
use telsim::spectral::SpectralParams;
use telsim::volterra::{solve_p, AmplitudeTrajectory};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Spectral(#[from] telsim::spectral::SpectralError),
    #[error(transparent)]
    Volterra(#[from] telsim::volterra::VolterraError),
    #[error(transparent)]
    Dynamics(#[from] telsim::dynamics::DynamicsError),
    #[error(transparent)]
    Fidelity(#[from] telsim::fidelity::FidelityError),
}

fn write_file(path: &Path, contents: &str) -> Result<(), PipelineError> {
    std::fs::write(path, contents).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One solved coupling: trajectory, rates, and the fidelity series for
/// every requested mixing parameter (computed through the full two-qubit
/// pipeline, not the closed form).
struct Curve {
    eta: f64,
    traj: AmplitudeTrajectory,
    profile: DecayProfile,
    /// `(r, F_av(t_k))` per mixing parameter.
    fidelities: Vec<(f64, Vec<f64>)>,
}

/// Average fidelity along a trajectory by evolving the Werner channel at
/// every grid point. Amplitudes that exceed unit modulus by solver
/// tolerance are projected back onto the disk.
fn fidelity_series(traj: &AmplitudeTrajectory, r: f64) -> Result<Vec<f64>, PipelineError> {
    let rho0 = werner_state(&WernerParams::new(r)?);
    traj.values()
        .iter()
        .map(|&p| {
            let norm = p.norm();
            let p = if norm > 1.0 { p / norm } else { p };
            Ok(f_avg(&two_qubit_evolve(&rho0, p)?)?)
        })
        .collect()
}

fn solve_curve(config: &ScenarioConfig, eta: f64) -> Result<Curve, PipelineError> {
    let params = SpectralParams::new(config.s, eta, config.omega_c, config.omega_0)?;
    let traj = solve_p(&params, config.t_max, config.dt)?;
    let profile = decay_profile(&traj)?;
    let fidelities = config
        .rs
        .iter()
        .map(|&r| Ok((r, fidelity_series(&traj, r)?)))
        .collect::<Result<Vec<_>, PipelineError>>()?;
    Ok(Curve {
        eta,
        traj,
        profile,
        fidelities,
    })
}

fn solve_all_curves(config: &ScenarioConfig) -> Result<Vec<Curve>, PipelineError> {
    // Curves are independent; solve them in parallel and keep list order.
    config
        .etas
        .par_iter()
        .map(|&eta| solve_curve(config, eta))
        .collect()
}

fn common_comments(config: &ScenarioConfig, title: &str) -> Vec<String> {
    vec![
        title.to_string(),
        format!("preset: {}", config.preset.name()),
        format!("s: {}", config.s),
        format!("omega_c: {} (units of omega_0)", fmt_param(config.omega_c)),
        format!("omega_0: {}", fmt_param(config.omega_0)),
    ]
}

fn solver_comments(config: &ScenarioConfig) -> Vec<String> {
    vec![
        format!("t_max: {} (units of 1/omega_0)", fmt_param(config.t_max)),
        format!("dt: {}", fmt_param(config.dt)),
        "solver: trapezoidal predictor-corrector on a uniform grid; rates from central differences"
            .to_string(),
        "time columns are omega_0 * t; masked rate samples print as nan".to_string(),
    ]
}

/// Run a scenario to completion, returning the written files in order.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<PathBuf>, PipelineError> {
    std::fs::create_dir_all(&config.out_dir).map_err(|source| PipelineError::Io {
        path: config.out_dir.clone(),
        source,
    })?;
    match config.preset {
        Preset::Fig1 => run_closed_form_figure(config),
        Preset::Fig5 => run_combined_figure(config),
        _ => run_curve_family(config),
    }
}

/// Closed-form fidelity versus amplitude modulus; no solver involved.
fn run_closed_form_figure(config: &ScenarioConfig) -> Result<Vec<PathBuf>, PipelineError> {
    let mut written = Vec::new();
    let grid: Vec<f64> = (0..P_GRID_POINTS)
        .map(|k| k as f64 / (P_GRID_POINTS - 1) as f64)
        .collect();

    let mut panel = Panel {
        title: "average fidelity of the Werner-like channel".into(),
        x_label: "|p|".into(),
        y_label: "F_av".into(),
        series: Vec::new(),
        ref_lines: vec![(2.0 / 3.0, "2/3".into())],
        show_legend: true,
    };

    for (idx, &r) in config.rs.iter().enumerate() {
        let params = WernerParams::new(r)?;
        let curve: Vec<f64> = grid
            .iter()
            .map(|&p| f_avg_closed_form(&params, p))
            .collect::<Result<_, _>>()?;
        if config.formats.csv {
            let mut comments = common_comments(
                config,
                "closed-form average fidelity versus amplitude modulus",
            );
            comments.push(format!("r: {}", fmt_param(r)));
            let rows: Vec<Vec<Option<f64>>> = grid
                .iter()
                .zip(&curve)
                .map(|(&p, &f)| vec![Some(p), Some(f)])
                .collect();
            let path = config.out_dir.join(format!("fig1_r{}.csv", fmt_param(r)));
            write_file(&path, &render_csv(&comments, &["p_abs", "f_avg"], &rows))?;
            written.push(path);
        }
        panel.series.push(Series {
            label: format!("r = {}", fmt_param(r)),
            color: PALETTE[idx % PALETTE.len()].to_string(),
            points: grid.iter().copied().zip(curve.iter().copied()).collect(),
        });
    }

    if config.formats.svg {
        let path = config.out_dir.join("fig1.svg");
        write_file(&path, &render_figure(&[(panel, 1.0)]))?;
        written.push(path);
    }
    Ok(written)
}

/// One CSV per (eta, r) curve plus a combined two-panel SVG (fidelity and
/// normalized decay rate).
fn run_curve_family(config: &ScenarioConfig) -> Result<Vec<PathBuf>, PipelineError> {
    let curves = solve_all_curves(config)?;
    let mut written = Vec::new();

    if config.formats.csv {
        for curve in &curves {
            for (r, fidelity) in &curve.fidelities {
                let mut comments = common_comments(
                    config,
                    "average fidelity and normalized decay rate along the solved trajectory",
                );
                comments.insert(3, format!("eta: {}", fmt_param(curve.eta)));
                comments.push(format!("r: {}", fmt_param(*r)));
                comments.extend(solver_comments(config));
                let rows: Vec<Vec<Option<f64>>> = curve
                    .traj
                    .times()
                    .iter()
                    .enumerate()
                    .map(|(k, &t)| {
                        let p = curve.traj.values()[k];
                        vec![
                            Some(t),
                            Some(p.norm()),
                            Some(p.norm_sqr()),
                            Some(fidelity[k]),
                            curve.profile.gamma_norm()[k],
                        ]
                    })
                    .collect();
                let r_suffix = if config.rs.len() > 1 || config.preset == Preset::Custom {
                    format!("_r{}", fmt_param(*r))
                } else {
                    String::new()
                };
                let path = config.out_dir.join(format!(
                    "{}_eta{}{}.csv",
                    config.preset.name(),
                    fmt_param(curve.eta),
                    r_suffix
                ));
                write_file(
                    &path,
                    &render_csv(
                        &comments,
                        &["omega0_t", "p_abs", "p_squared", "f_avg", "gamma_norm"],
                        &rows,
                    ),
                )?;
                written.push(path);
            }
        }
    }

    if config.formats.svg {
        let mut fidelity_panel = Panel {
            title: format!("average fidelity, s = {}", config.s),
            x_label: String::new(),
            y_label: "F_av".into(),
            series: Vec::new(),
            ref_lines: vec![(2.0 / 3.0, "2/3".into())],
            show_legend: true,
        };
        let mut rate_panel = Panel {
            title: "normalized decay rate".into(),
            x_label: "omega_0 t".into(),
            y_label: "gamma".into(),
            series: Vec::new(),
            ref_lines: vec![(0.0, String::new())],
            show_legend: false,
        };
        for (idx, curve) in curves.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()].to_string();
            for (r, fidelity) in &curve.fidelities {
                let label = if config.rs.len() > 1 {
                    format!("eta = {}, r = {}", fmt_param(curve.eta), fmt_param(*r))
                } else {
                    format!("eta = {}", fmt_param(curve.eta))
                };
                fidelity_panel.series.push(Series {
                    label,
                    color: color.clone(),
                    points: curve
                        .traj
                        .times()
                        .iter()
                        .copied()
                        .zip(fidelity.iter().copied())
                        .collect(),
                });
            }
            rate_panel.series.push(Series {
                label: format!("eta = {}", fmt_param(curve.eta)),
                color,
                points: curve
                    .traj
                    .times()
                    .iter()
                    .zip(curve.profile.gamma_norm())
                    .map(|(&t, g)| (t, g.unwrap_or(f64::NAN)))
                    .collect(),
            });
        }
        let path = config.out_dir.join(format!("{}.svg", config.preset.name()));
        write_file(
            &path,
            &render_figure(&[(fidelity_panel, 0.62), (rate_panel, 0.38)]),
        )?;
        written.push(path);
    }
    Ok(written)
}

/// Single-trajectory comparison figure: fidelity for each mixing
/// parameter, the normalized decay rate, and the population, in one CSV
/// and one SVG with the 1/3 and 2/3 reference lines.
fn run_combined_figure(config: &ScenarioConfig) -> Result<Vec<PathBuf>, PipelineError> {
    let eta = config.etas[0];
    let curve = solve_curve(config, eta)?;
    let mut written = Vec::new();

    if config.formats.csv {
        let mut comments = common_comments(
            config,
            "fidelity versus decay rate and population on one trajectory",
        );
        comments.insert(3, format!("eta: {}", fmt_param(eta)));
        comments.push(format!(
            "r: {}",
            config
                .rs
                .iter()
                .map(|&r| fmt_param(r))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        comments.extend(solver_comments(config));
        let mut columns = vec!["omega0_t".to_string()];
        for (r, _) in &curve.fidelities {
            columns.push(format!("f_avg_r{}", fmt_param(*r)));
        }
        columns.push("gamma_norm".to_string());
        columns.push("p_squared".to_string());
        let column_refs: Vec<&str> = columns.iter().map(|c| c.as_str()).collect();

        let rows: Vec<Vec<Option<f64>>> = curve
            .traj
            .times()
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let mut row = vec![Some(t)];
                for (_, fidelity) in &curve.fidelities {
                    row.push(Some(fidelity[k]));
                }
                row.push(curve.profile.gamma_norm()[k]);
                row.push(Some(curve.traj.values()[k].norm_sqr()));
                row
            })
            .collect();
        let path = config.out_dir.join(format!("{}.csv", config.preset.name()));
        write_file(&path, &render_csv(&comments, &column_refs, &rows))?;
        written.push(path);
    }

    if config.formats.svg {
        let times = curve.traj.times();
        let mut series = Vec::new();
        for (idx, (r, fidelity)) in curve.fidelities.iter().enumerate() {
            series.push(Series {
                label: format!("F_av, r = {}", fmt_param(*r)),
                color: PALETTE[(2 + idx) % PALETTE.len()].to_string(),
                points: times
                    .iter()
                    .copied()
                    .zip(fidelity.iter().copied())
                    .collect(),
            });
        }
        series.push(Series {
            label: "gamma".into(),
            color: PALETTE[0].to_string(),
            points: times
                .iter()
                .zip(curve.profile.gamma_norm())
                .map(|(&t, g)| (t, g.unwrap_or(f64::NAN)))
                .collect(),
        });
        series.push(Series {
            label: "|p|^2".into(),
            color: PALETTE[1].to_string(),
            points: times
                .iter()
                .zip(curve.traj.values())
                .map(|(&t, p)| (t, p.norm_sqr()))
                .collect(),
        });
        let panel = Panel {
            title: format!(
                "fidelity, decay rate, and population (s = {}, eta = {})",
                config.s,
                fmt_param(eta)
            ),
            x_label: "omega_0 t".into(),
            y_label: String::new(),
            series,
            ref_lines: vec![(2.0 / 3.0, "2/3".into()), (1.0 / 3.0, "1/3".into())],
            show_legend: true,
        };
        let path = config.out_dir.join(format!("{}.svg", config.preset.name()));
        write_file(&path, &render_figure(&[(panel, 1.0)]))?;
        written.push(path);
    }
    Ok(written)
}
