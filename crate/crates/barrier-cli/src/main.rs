//! Command-line front end for the barrier delay-time library.
//!
//! Exit codes: 0 on success, 1 when a consistency check fails or a
//! computation cannot be completed, 2 for configuration mistakes
//! (bad flags, malformed config files, out-of-range parameters).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

#[derive(Debug, Parser)]
#[command(
    name = "barrier-times",
    about = "Tunneling delay times for a rectangular barrier",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the delay times over an energy-fraction grid and emit CSV.
    Times {
        /// Barrier strength wL (with w the barrier momentum scale).
        #[arg(long)]
        wl: f64,
        /// Lower edge of the energy-fraction grid.
        #[arg(long, default_value_t = 0.05)]
        n_min: f64,
        /// Upper edge of the energy-fraction grid.
        #[arg(long, default_value_t = 0.95)]
        n_max: f64,
        /// Number of grid rows.
        #[arg(long, default_value_t = 181)]
        steps: usize,
        /// Divide every time by the classical traversal time m L / k.
        #[arg(long)]
        normalize: bool,
        /// Destination file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the scattering amplitudes and phases at one grid point.
    Amplitudes {
        /// Barrier strength wL.
        #[arg(long)]
        wl: f64,
        /// Energy fraction n = E / V0, strictly inside (0, 1).
        #[arg(long)]
        n: f64,
        /// Also cross-check against the transfer matrix and the matching
        /// residuals of the piecewise solution.
        #[arg(long)]
        oracle: bool,
    },
    /// Propagate a wave packet from a JSON config and report delay times.
    Simulate {
        /// Path to the run description (see README for the schema).
        #[arg(long)]
        config: PathBuf,
        /// Write density snapshots to this file (binary, magic BTWV0001).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the internal consistency checks.
    Check {
        /// Use the smaller verification grid (sub-second).
        #[arg(long)]
        fast: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Times { wl, n_min, n_max, steps, normalize, out } => {
            commands::times(wl, n_min, n_max, steps, normalize, out.as_deref())
        }
        Command::Amplitudes { wl, n, oracle } => commands::amplitudes(wl, n, oracle),
        Command::Simulate { config, out } => commands::simulate(&config, out.as_deref()),
        Command::Check { fast } => commands::check(fast),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_configuration() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
