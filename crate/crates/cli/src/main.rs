use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use superatom_cli::config::{Overrides, ScenarioConfig};
use superatom_cli::error::CliError;

#[derive(Parser)]
#[command(name = "superatom", version, about = "Membrane–superatom reproduction scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its tables.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: out/<scenario>).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        n_traj: Option<usize>,
        /// Print nothing on success.
        #[arg(long)]
        quiet: bool,
    },
    /// Parse, check and print derived quantities without simulating.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, seed, out, n_traj, quiet } => {
            superatom_cli::execute(&config, &Overrides { seed, out, n_traj }).map(|done| {
                if !quiet {
                    for w in &done.output.warnings {
                        eprintln!("warning: {w}");
                    }
                    println!("wrote {} files to {}", done.files.len(), done.dir.display());
                }
            })
        }
        Command::Validate { config } => ScenarioConfig::load(&config)
            .and_then(|cfg| superatom_cli::report::validate(&cfg.to_internal()))
            .map(|r| print!("{}", r.text)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.machine_line());
    ExitCode::from(e.kind.exit_code() as u8)
}
