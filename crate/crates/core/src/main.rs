use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use boseglass::run::{execute, Command, Config, RunError};
use boseglass::superradiance::Variant;
use clap::{Parser, Subcommand};

/// Localized Bose condensates in disordered wells: ground states,
/// localization curves, finite-temperature condensation and superradiance.
///
/// Parameters come from a TOML file (`--config`); missing keys take the
/// defaults shown by `print-config`. Exit codes: 0 success, 2 invalid
/// configuration, 3 numerical failure, 1 i/o error.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV tables and run_manifest.json.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads for independent sweep points.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Cooperativity prefactor (as-printed | limit-consistent).
    #[arg(long, global = true)]
    variant: Option<Variant>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Chemical potential against well radius at fixed (u, n_c).
    MuOfL,
    /// Localization length against density, with the critical fit.
    LocCurve {
        /// Also emit the curve mapped by u -> u/a, n_c -> a n_c.
        #[arg(long)]
        rescale: Option<f64>,
    },
    /// Critical power-law fit, of a saved curve or a fresh one.
    Fit {
        /// A loc_curve.csv to fit instead of recomputing.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Condensate fraction, lake size and emission enhancement against T.
    Thermo,
    /// Angular emission pattern and cooperativity of one lake.
    Emission,
    /// Print the effective configuration as TOML.
    PrintConfig,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => Config::default(),
    };
    if cli.workers.is_some() {
        config.workers = cli.workers;
    }
    if let Some(v) = cli.variant {
        config.emission.variant = v;
    }
    let command = match cli.command {
        Cmd::MuOfL => Command::MuOfL,
        Cmd::LocCurve { rescale } => {
            config.loc_curve.rescale = rescale.or(config.loc_curve.rescale);
            Command::LocCurve
        }
        Cmd::Fit { curve } => {
            config.fit.curve_csv = curve.or(config.fit.curve_csv);
            Command::Fit
        }
        Cmd::Thermo => Command::Thermo,
        Cmd::Emission => Command::Emission,
        Cmd::PrintConfig => {
            print!("{}", config.to_toml());
            return Ok(());
        }
    };
    let summary = execute(command, &config, &cli.out).with_context(|| format!("{} failed", command.name()))?;
    for note in &summary.notes {
        eprintln!("{note}");
    }
    for path in &summary.outputs {
        println!("{}", path.display());
    }
    if summary.failed_points > 0 {
        return Err(RunError::Numerical(format!(
            "{} sweep point(s) did not converge; their rows are empty",
            summary.failed_points
        ))
        .into());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<RunError>().map_or(1, RunError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
