use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qps_cli::{cmd_kirkwood, cmd_mub, cmd_reconstruct, cmd_verify, cmd_wigner, CliError, Format};
use qps_core::probe::ProbeConfig;
use qps_core::verify::VerifyOptions;

/// Discrete phase-space tools for prime-dimensional quantum states.
#[derive(Debug, Parser)]
#[command(name = "qps", version)]
struct Cli {
    /// Absolute tolerance for state validation and property checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Wigner grid of a state file.
    Wigner {
        state: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Kirkwood grid of a state file.
    Kirkwood {
        state: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Wigner grid reconstructed from simulated two-probe correlations.
    Reconstruct {
        state: PathBuf,
        /// Output grid; the deviation report goes to OUT.report.json
        /// (stderr when writing to stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Coupling of the first (position) probe; 0 gives the exact limit.
        #[arg(long, default_value_t = 1e-3)]
        eps1: f64,
        /// Coupling of the second (momentum) probe.
        #[arg(long, default_value_t = 1.0)]
        eps2: f64,
        /// Momentum variance of the first probe.
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
        /// Coupling of the single-probe population measurements.
        #[arg(long, default_value_t = 1.0)]
        eps_single: f64,
        /// Richardson-extrapolate from couplings eps1 and eps1/2.
        #[arg(long)]
        extrapolate: bool,
    },
    /// Run the property suites on seeded random states.
    Verify {
        #[arg(long, default_value_t = 5)]
        n: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit all mutually unbiased basis vectors as JSON.
    Mub {
        #[arg(long)]
        n: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = cli.tol;
    match cli.command {
        Command::Wigner { state, out, format } => cmd_wigner(&state, out.as_deref(), format, tol),
        Command::Kirkwood { state, out, format } => {
            cmd_kirkwood(&state, out.as_deref(), format, tol)
        }
        Command::Reconstruct {
            state,
            out,
            format,
            eps1,
            eps2,
            sigma2,
            eps_single,
            extrapolate,
        } => {
            let config = ProbeConfig {
                eps1,
                eps2,
                sigma_p1_sq: sigma2,
                eps_single,
            };
            cmd_reconstruct(&state, out.as_deref(), format, config, extrapolate, tol).map(|_| ())
        }
        Command::Verify { n, trials, seed } => {
            cmd_verify(n, VerifyOptions { trials, seed, tol }).map(|_| ())
        }
        Command::Mub { n, out } => cmd_mub(n, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qps: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
