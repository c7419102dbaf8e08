//! Batch verification front end: runs the dense simulator and the closed
//! forms, emits deterministic CSV artifacts, and sets the exit code to 1
//! whenever a bound or cross-validation tolerance is violated (2 for usage
//! errors, 3 for I/O errors).

mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "groverlab",
    about = "Grover search in the density-matrix picture: spectra, entropy curves, \
             drift audits, and query lower bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Closed forms; any dimension.
    Analytic,
    /// Brute-force simulation; dimension capped at 2048.
    Dense,
}

#[derive(Subcommand)]
enum Command {
    /// Dense per-step run: success probability, error probability, entropy.
    Simulate {
        /// Number of search items.
        #[arg(long)]
        n: usize,
        /// Grover iterations to run; defaults to floor(pi/4 sqrt(n)).
        #[arg(long)]
        k: Option<usize>,
        /// CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form per-step table with the same columns as `simulate`.
    Analytic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalue/entropy curve over (possibly fractional) time.
    Curve {
        #[arg(long)]
        n: usize,
        /// Last sample time, in oracle-call units.
        #[arg(long)]
        t_max: f64,
        /// Sample spacing.
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
        #[arg(long, value_enum, default_value_t = Engine::Analytic)]
        engine: Engine,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form vs dense spectrum/entropy comparison over one period.
    Verify {
        #[arg(long)]
        n: usize,
    },
    /// Full-run eigenvalue drift audit against the 2 pi / sqrt(n) bound.
    Drift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Flow samples per oracle call.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inequality-chain audit and query lower bounds over truncations K=0..k.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Evaluate the bound formulas at this error probability instead of
        /// simulating.
        #[arg(long)]
        pe: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors carrying their process exit code.
pub enum CliError {
    /// Invariant or inequality violation (exit 1).
    Violation(String),
    /// Bad configuration (exit 2).
    Config(String),
    /// Filesystem failure (exit 3).
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Violation(m) | CliError::Config(m) | CliError::Io(m) => m,
        }
    }
}

impl From<groverlab::Error> for CliError {
    fn from(err: groverlab::Error) -> Self {
        match err {
            groverlab::Error::AuditFailed { .. } => CliError::Violation(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { n, k, out } => commands::simulate(n, k, out.as_deref()),
        Command::Analytic { n, k, out } => commands::analytic(n, k, out.as_deref()),
        Command::Curve {
            n,
            t_max,
            dt,
            engine,
            out,
        } => commands::curve(n, t_max, dt, engine, out.as_deref()),
        Command::Verify { n } => commands::verify(n),
        Command::Drift { n, k, grid, out } => commands::drift(n, k, grid, out.as_deref()),
        Command::Bounds { n, k, pe, out } => commands::bounds(n, k, pe, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
