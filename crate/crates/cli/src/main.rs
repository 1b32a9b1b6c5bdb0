//! `qdpomdp` — seeded, reproducible runs of the magic-square game and the
//! decentralized POMDP built on it.
//!
//! Every command prints a JSON envelope
//! `{command, config, results, paper_claim, pass}` and exits 0 when the
//! checked claim holds, 1 when it does not, and 2 on bad input.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::{CliError, GameMode, Report};
use config::{CommonArgs, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "qdpomdp",
    version,
    about = "Magic-square game and decentralized POMDP experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the algebraic identities of the magic square.
    ValidateSquare {
        /// Flip the sign of entry (3,3) before validating.
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// Classical bound or quantum win rate of the one-shot game.
    Game {
        #[arg(value_enum)]
        mode: GameMode,
    },
    /// Simulate the decentralized POMDP.
    Pomdp,
    /// Exhaustive checks of the classical per-step bound.
    Oracles,
    /// Partial-transpose entanglement witness on reference states.
    Entanglement,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ValidateSquare { .. } => "validate-square",
            Command::Game { .. } => "game",
            Command::Pomdp => "pomdp",
            Command::Oracles => "oracles",
            Command::Entanglement => "entanglement",
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    config: &'a RunConfig,
    results: &'a serde_json::Value,
    paper_claim: &'a str,
    pass: bool,
}

fn run(cli: &Cli) -> Result<(RunConfig, Report), CliError> {
    let name = match &cli.command {
        Command::Game { mode } => format!(
            "game {}",
            clap::ValueEnum::to_possible_value(mode).unwrap().get_name()
        ),
        other => other.name().to_string(),
    };
    let cfg = RunConfig::resolve(&name, &cli.common)?;
    if cfg.format == Format::Csv && !matches!(cli.command, Command::Pomdp) {
        return Err(CliError::Usage(
            "--format csv is only available for pomdp".into(),
        ));
    }
    let report = match &cli.command {
        Command::ValidateSquare { tamper } => commands::validate_square_cmd(*tamper)?,
        Command::Game { mode } => commands::game_cmd(*mode, &cfg)?,
        Command::Pomdp => commands::pomdp_cmd(&cfg)?,
        Command::Oracles => commands::oracles_cmd(&cfg)?,
        Command::Entanglement => commands::entanglement_cmd()?,
    };
    Ok((cfg, report))
}

fn emit(cfg: &RunConfig, report: &Report) -> std::io::Result<()> {
    let body = match &report.csv {
        Some(csv) => csv.clone(),
        None => {
            let env = Envelope {
                command: &cfg.command,
                config: cfg,
                results: &report.results,
                paper_claim: report.claim,
                pass: report.pass,
            };
            let mut s = serde_json::to_string_pretty(&env).expect("envelope serializes");
            s.push('\n');
            s
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, report) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cfg, &report) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        if let Some(failing) = report.results.get("failing_checks") {
            eprintln!("failing checks: {failing}");
        }
        eprintln!("{}: claim not reproduced", cfg.command);
        ExitCode::from(1)
    }
}
