mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Overrides, RunConfig};
use error::CliError;

/// Bounds on device-independent conference key rates.
#[derive(Debug, Parser)]
#[command(name = "dicka", version)]
struct Cli {
    #[command(flatten)]
    flags: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalFlags {
    /// Smallest noise value of the grid
    #[arg(long, global = true)]
    nu_min: Option<f64>,
    /// Largest noise value of the grid
    #[arg(long, global = true)]
    nu_max: Option<f64>,
    /// Grid spacing
    #[arg(long, global = true)]
    nu_step: Option<f64>,
    /// Also minimize over Eve's channels
    #[arg(long, global = true)]
    minimize: bool,
    /// Seed for random instances
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of worker threads
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// key = value file with defaults for the flags above
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the intrinsic, dual, trivial and proxy curves as CSV
    Curves,
    /// Run the seeded identity suites
    Verify {
        /// Instances per suite (default 100, 200 for duality)
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Print parity-CHSH game diagnostics and the critical noise
    Game,
    /// Build the convex-combination attack at one noise value
    Attack {
        #[arg(long, default_value_t = 0.05)]
        nu: f64,
        /// Export Eve's post-processed guess instead of the raw attack joint
        #[arg(long)]
        postprocess: bool,
    },
    /// Simulate the one-time-pad key relay along a path
    Relay {
        #[arg(long, default_value_t = 3)]
        parties: usize,
        #[arg(long, default_value_t = 8)]
        key_len: usize,
        /// Also enumerate every branch (small keys only)
        #[arg(long)]
        exhaustive: bool,
    },
    /// List the nontrivial partitions of the parties
    Partitions {
        #[arg(long, default_value_t = 3)]
        parties: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let f = cli.flags;
    let overrides = Overrides {
        nu_min: f.nu_min,
        nu_max: f.nu_max,
        nu_step: f.nu_step,
        minimize: f.minimize,
        seed: f.seed,
        out: f.out,
        workers: f.workers,
    };
    let cfg = RunConfig::resolve(f.config.as_deref(), &overrides)?;
    if let Some(n) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?;
    }
    match cli.command {
        Command::Curves => commands::curves(&cfg),
        Command::Verify { instances, corrupt } => commands::verify(&cfg, instances, corrupt),
        Command::Game => commands::game(),
        Command::Attack { nu, postprocess } => commands::attack(&cfg, nu, postprocess),
        Command::Relay { parties, key_len, exhaustive } => commands::relay(&cfg, parties, key_len, exhaustive),
        Command::Partitions { parties } => commands::partitions(parties),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
