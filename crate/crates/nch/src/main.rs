//! Command-line front end: run simulations, convergence studies and the
//! structural-identity check from JSON configuration files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nch::driver::{
    self_convergence_space, self_convergence_time, run_simulation, structural_check, RunConfig,
    DEFAULT_SPACE_LEVELS, DEFAULT_TIME_LEVELS,
};
use nch::Error;

#[derive(Parser)]
#[command(
    name = "nch",
    version,
    about = "Structure-preserving finite element solver for nonisothermal phase separation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its CSV/VTK artifacts
    Run { config: PathBuf },
    /// Spatial self-convergence study (Cauchy errors and EOC table)
    ConvergeSpace { config: PathBuf },
    /// Temporal self-convergence study (Cauchy errors and EOC table)
    ConvergeTime { config: PathBuf },
    /// Verify the structural identities on the configured run
    Check { config: PathBuf },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let outcome = run_simulation(&cfg)?;
            let first = &outcome.records[0];
            let last = outcome.records.last().expect("at least the initial record");
            let mass_drift = outcome
                .records
                .iter()
                .fold(0.0f64, |m, r| m.max((r.mass - first.mass).abs()));
            let max_newton = outcome
                .records
                .iter()
                .map(|r| r.newton_iterations)
                .max()
                .unwrap_or(0);
            println!("steps completed:     {}", outcome.records.len() - 1);
            println!("final time:          {}", last.time);
            println!("mass drift (max):    {mass_drift:.3e}");
            println!("entropy change:      {:.6e}", last.entropy - first.entropy);
            println!("energy change:       {:.6e}", last.energy - first.energy);
            println!(
                "temperature range:   [{:.6e}, {:.6e}]",
                last.theta_min, last.theta_max
            );
            println!("newton iters (max):  {max_newton}");
            if let Some(path) = &cfg.output.csv {
                println!("diagnostics csv:     {}", path.display());
            }
            if let Some(dir) = &cfg.output.vtk_dir {
                println!("vtk snapshots:       {}", dir.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ConvergeSpace { config } => {
            let cfg = RunConfig::load(&config)?;
            let levels = cfg.space_levels.unwrap_or(DEFAULT_SPACE_LEVELS);
            let table = self_convergence_space(&cfg, levels)?;
            print!("{table}");
            Ok(ExitCode::SUCCESS)
        }
        Command::ConvergeTime { config } => {
            let cfg = RunConfig::load(&config)?;
            let levels = cfg.time_levels.unwrap_or(DEFAULT_TIME_LEVELS);
            let table = self_convergence_time(&cfg, levels)?;
            print!("{table}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { config } => {
            let cfg = RunConfig::load(&config)?;
            let report = structural_check(&cfg)?;
            print!("{report}");
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

/// Machine-readable error rendering for scripts driving the CLI.
fn error_json(err: &Error) -> String {
    serde_json::json!({
        "error": {
            "kind": err.kind(),
            "message": err.to_string(),
        }
    })
    .to_string()
}
