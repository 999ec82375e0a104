use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::commands::{cmd_compare, cmd_ising, cmd_plateau, cmd_run, CommandOptions, Status};
use super::config::ConfigFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "graphlind", version, about = "Lindblad decoherence of graph states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate every (run, N) pair and write time series.
    Run(CommonArgs),
    /// Compare the engine against the closed forms.
    Compare(CommonArgs),
    /// Fit the OSEE plateau length against ln N.
    Plateau(CommonArgs),
    /// OSEE peak and bond growth with an Ising coupling.
    Ising(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Runs the CLI and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (args, f): (&CommonArgs, fn(&ConfigFile, &CommandOptions) -> crate::Result<_>) = match &cli.command {
        Command::Run(a) => (a, cmd_run),
        Command::Compare(a) => (a, cmd_compare),
        Command::Plateau(a) => (a, cmd_plateau),
        Command::Ising(a) => (a, cmd_ising),
    };
    if let Some(t) = args.tol {
        if !(t >= 0.0) {
            eprintln!("error: --tol must be nonnegative");
            return EXIT_USAGE;
        }
    }
    let cfg = match ConfigFile::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let opts = CommandOptions { out_dir: args.out.clone(), workers: args.workers, tol: args.tol };
    match f(&cfg, &opts) {
        Ok(outcome) => {
            for l in &outcome.lines {
                println!("{l}");
            }
            match outcome.status {
                Status::Ok => EXIT_OK,
                Status::ToleranceFailure => EXIT_TOLERANCE,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
