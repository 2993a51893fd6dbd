//! `xduce`: command-line front end for the transduction model.
//!
//! ```text
//! xduce efficiency|sweep|herald|verify --config <path>
//!       [--mc N] [--seed S] [--format csv|jsonl] [--plot out.svg] [--out path] [--dump-normalized]
//! ```
//!
//! Exit codes: 0 success, 2 config, 3 domain, 4 i/o, 5 unsupported,
//! 6 verification failure.

mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    /// Efficiency breakdown at the configured drive.
    Efficiency,
    /// Power x Q sweep table, optionally with an SVG plot.
    Sweep,
    /// Heralding probabilities, optionally with a Monte Carlo estimate.
    Herald,
    /// Check the closed-form efficiency against the scattering solve.
    Verify,
}

#[derive(Debug, Parser)]
#[command(name = "xduce", version, about = "Cavity electro-optic transduction calculator")]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Monte Carlo samples for `herald`.
    #[arg(long, value_name = "N")]
    mc: Option<u64>,

    /// RNG seed; overrides output.seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Output format; overrides output.format.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// SVG plot path for `sweep`; overrides output.plot.
    #[arg(long)]
    plot: Option<String>,

    /// Table path for `sweep`; overrides output.path.
    #[arg(long)]
    out: Option<String>,

    /// Print the config with all rates in rad/s and exit.
    #[arg(long)]
    dump_normalized: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::load(&cli.config)?.normalize()?;
    if cli.dump_normalized {
        let text = serde_json::to_string_pretty(&cfg).map_err(|e| error::io_err("dump", e))?;
        println!("{text}");
        return Ok(());
    }
    let opts = commands::Options {
        format: cli.format.unwrap_or(cfg.output.format),
        seed: cli.seed.unwrap_or(cfg.output.seed),
        mc_samples: cli.mc,
        plot: cli.plot.or_else(|| cfg.output.plot.clone()),
        out: cli.out.or_else(|| cfg.output.path.clone()),
    };
    if opts.mc_samples.is_some() && !matches!(cli.command, Command::Herald) {
        return Err(CliError::Config("--mc only applies to the herald subcommand".into()));
    }
    match cli.command {
        Command::Efficiency => commands::efficiency(&cfg, &opts),
        Command::Sweep => commands::sweep(&cfg, &opts),
        Command::Herald => commands::herald(&cfg, &opts),
        Command::Verify => commands::verify(&cfg, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xduce: {e}");
            e.into()
        }
    }
}
