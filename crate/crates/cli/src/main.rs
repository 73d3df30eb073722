//! `signstab`: command-line front end for the tropical cluster engine.
//!
//! Every subcommand writes a JSON report to stdout (or `--output`) and a
//! one-line summary to stderr. Exit status is 0 on success, 1 on a domain
//! error and 2 on a usage error.

mod commands;
mod inputs;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use commands::{run, Command};
use inputs::{usage, CliError};

#[derive(Debug, Parser)]
#[command(name = "signstab", version, about = "Sign stability of tropical cluster mutation loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    json_only: bool,
    /// Require every irrational input to lie in Q(sqrt d).
    #[arg(long, global = true)]
    radicand: Option<u64>,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Mutate { .. } => "mutate",
        Command::Transport { .. } => "transport",
        Command::Sign { .. } => "sign",
        Command::Orbit { .. } => "orbit",
        Command::StableSign { .. } => "stable-sign",
        Command::SignsEnumerate { .. } => "signs-enumerate",
        Command::Presentation { .. } => "presentation",
        Command::Charpoly { .. } => "charpoly",
        Command::Stretch { .. } => "stretch",
        Command::Eigencheck { .. } => "eigencheck",
        Command::Compat { .. } => "compat",
        Command::Hereditary { .. } => "hereditary",
        Command::Skeleton { .. } => "skeleton",
        Command::Freeze { .. } => "freeze",
        Command::DualityCheck { .. } => "duality-check",
        Command::Pants { .. } => "pants",
        Command::Annulus { .. } => "annulus",
        Command::TrackValidate { .. } => "track-validate",
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("SIGNSTAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("SIGNSTAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("cannot size the thread pool: {e}")))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    if let Some(d) = cli.radicand {
        signstab::QuadExt::sqrt(d)?;
    }
    let report = run(&cli.command, cli.radicand)?;
    let mut body = json!({
        "schema_version": signstab::SCHEMA_VERSION,
        "command": command_name(&cli.command),
    });
    let fields = match report.json {
        serde_json::Value::Object(m) => m,
        other => [("result".to_string(), other)].into_iter().collect(),
    };
    for (k, v) in fields {
        body[k] = v;
    }
    if let Some(d) = cli.radicand {
        body["inputs"]["radicand"] = json!(d);
    }
    let text = serde_json::to_string_pretty(&body).expect("reports are plain JSON") + "\n";
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Write {
            path: path.clone(),
            reason: e.to_string(),
        })?,
        None => print!("{text}"),
    }
    if !cli.json_only {
        eprintln!("{}", report.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
