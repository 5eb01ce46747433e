use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pursuit_core::cli::{cmd_certify, cmd_run, cmd_sweep, cmd_times, CliResult, Overrides, ScenarioConfig};

/// Guaranteed pursuit times and capture simulation for the linear
/// pursuit-evasion game on l2.
#[derive(Debug, Parser)]
#[command(name = "pursuit", version)]
struct Args {
    /// Scenario file (TOML). Without one the built-in demo scenario is used.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path for the trajectory (`run`) or sweep (`sweep`) CSV.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the piecewise-random evader.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Capture tolerance.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Number of base grid steps.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Print the effective scenario as TOML and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-coordinate and guaranteed pursuit times against the baseline.
    Times,
    /// Simulate one game and write the trajectory CSV.
    Run,
    /// Tabulate T, T0 and T/T0 over the configured sweep axes.
    Sweep,
    /// Check the monotonicity certificate for f, g and g'.
    Certify,
}

fn execute(args: &Args, out: &mut dyn Write) -> CliResult<()> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::demo(),
    };
    cfg.apply(&Overrides {
        seed: args.seed,
        eps: args.eps,
        steps: args.steps,
    });
    if args.dump_config {
        write!(out, "{}", cfg.to_toml()?)?;
        return Ok(());
    }
    match args.command {
        Command::Times => cmd_times(&cfg, out),
        Command::Run => cmd_run(&cfg, args.out.as_deref(), out),
        Command::Sweep => cmd_sweep(&cfg, args.out.as_deref(), out),
        Command::Certify => cmd_certify(&cfg, out),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(&args, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.status.code() as u8)
        }
    }
}
