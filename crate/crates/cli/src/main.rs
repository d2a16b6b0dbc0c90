use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use equidist_cli::{execute, RunOpts};

/// Equidistribution diagnostics driver.
///
/// All run settings come from one declarative TOML file; the flags pick the
/// file, the output directory, and runtime knobs. Exit codes: 0 success,
/// 2 unreadable input, 3 invalid configuration, 4 infeasible request.
#[derive(Parser)]
#[command(name = "equidist", version, about)]
struct Cli {
    /// Path to the TOML run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Directory that relative output paths resolve against.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,

    /// Seed override for seeded input generators.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOpts { config: cli.config, out: cli.out, threads: cli.threads, seed: cli.seed };
    match execute(&opts) {
        Ok(outcome) => {
            match (&outcome.csv, &outcome.json) {
                (Some(csv), Some(json)) => eprintln!(
                    "wrote {} rows to {} and summary to {}",
                    outcome.rows,
                    csv.display(),
                    json.display()
                ),
                (Some(csv), None) => {
                    eprintln!("wrote {} rows to {}", outcome.rows, csv.display())
                }
                (None, Some(json)) => eprintln!("wrote {}", json.display()),
                (None, None) => {}
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
