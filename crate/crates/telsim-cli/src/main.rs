use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use telsim_cli::config::{self, Formats, Overrides, Preset};
use telsim_cli::pipeline::run_scenario;
use telsim_cli::validate::run_validation;

/// Teleportation fidelity through qubit channels decaying into structured
/// bosonic reservoirs (sub-Ohmic, Ohmic, super-Ohmic).
#[derive(Parser)]
#[command(name = "telsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)] // parsed once at startup
enum Command {
    /// Run a scenario and write CSV data and SVG figures.
    Run(RunArgs),
    /// Run the validation suite; exits nonzero if any check fails.
    Validate,
}

#[derive(Args)]
struct RunArgs {
    /// Figure preset: fig1, fig2, fig3, fig4, fig5, or custom.
    #[arg(long)]
    preset: Option<String>,
    /// Plain-text key-value config file (flags override its entries).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ohmicity exponent: 1/2 or a positive integer.
    #[arg(long)]
    s: Option<String>,
    /// Coupling constants, comma separated (e.g. 0.15,0.35,0.9).
    #[arg(long)]
    eta: Option<String>,
    /// Cutoff frequency in units of omega_0.
    #[arg(long = "omega-c")]
    omega_c: Option<f64>,
    /// Qubit Bohr frequency (sets the time unit).
    #[arg(long = "omega-0")]
    omega_0: Option<f64>,
    /// Werner mixing parameters, comma separated (fractions allowed, e.g. 1,1/3).
    #[arg(long)]
    r: Option<String>,
    /// Simulation window in units of 1/omega_0.
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Grid step in units of 1/omega_0 (at most 0.05).
    #[arg(long)]
    dt: Option<f64>,
    /// Output directory (default: $TELSIM_OUT or ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output formats, comma separated subset of csv,svg.
    #[arg(long)]
    format: Option<String>,
}

impl RunArgs {
    fn into_overrides(self) -> Result<Overrides> {
        let mut o = Overrides::default();
        if let Some(raw) = self.preset {
            o.preset = Some(raw.parse::<Preset>()?);
        }
        if let Some(raw) = self.s {
            o.s = Some(raw.parse().map_err(anyhow::Error::msg)?);
        }
        if let Some(raw) = self.eta {
            o.etas = Some(config::parse_float_list("eta", &raw)?);
        }
        if let Some(raw) = self.r {
            o.rs = Some(config::parse_float_list("r", &raw)?);
        }
        if let Some(raw) = self.format {
            let formats: Formats = {
                let mut f = Formats {
                    csv: false,
                    svg: false,
                };
                for tok in raw.split(',') {
                    match tok.trim() {
                        "csv" => f.csv = true,
                        "svg" => f.svg = true,
                        other => anyhow::bail!("unknown format {other:?} (expected csv, svg)"),
                    }
                }
                f
            };
            o.formats = Some(formats);
        }
        o.omega_c = self.omega_c;
        o.omega_0 = self.omega_0;
        o.t_max = self.t_max;
        o.dt = self.dt;
        o.out_dir = self.out;
        Ok(o)
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => {
            let from_file = match &args.config {
                Some(path) => config::parse_config_file(path)
                    .with_context(|| format!("reading config file {}", path.display()))?,
                None => Overrides::default(),
            };
            let overrides = from_file.merge(args.into_overrides()?);
            let scenario = config::resolve(overrides);
            let files = run_scenario(&scenario)?;
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
        Command::Validate => {
            let report = run_validation();
            print!("{}", report.render());
            if report.all_passed() {
                Ok(())
            } else {
                std::process::exit(1);
            }
        }
    }
}
