use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use causal_loops_cli::checks::REGISTRY;
use causal_loops_cli::{emit, parse, run, select_suite, CliError, Format, Report, ScenarioConfig};

/// Runs verification suites and prints structured reports.
///
/// Exit status: 0 if every record passes, 1 if any fails, 2 for config or input errors.
#[derive(Parser)]
#[command(name = "causal-loops", version)]
struct Cli {
    /// Scenario config (JSON). Defaults apply to absent fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite: geometry, simplex, loopgroup, holonomy, emfield or all.
    Verify { suite: String },
    /// Re-emit a saved JSON report.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// List registered checks.
    ListChecks,
}

enum Outcome {
    Done,
    Checked(bool),
}

fn load_config(path: Option<&PathBuf>, seed: Option<u64>) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match path {
        Some(p) => ScenarioConfig::from_json(&std::fs::read_to_string(p)?)?,
        None => ScenarioConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn write_report(report: &Report, format: Format) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    emit(report, format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn execute(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Verify { suite } => {
            let cfg = select_suite(load_config(cli.config.as_ref(), cli.seed)?, &suite)?;
            let report = run(&cfg)?;
            write_report(&report, cli.format.unwrap_or(Format::Json))?;
            Ok(Outcome::Checked(report.all_passed()))
        }
        Command::Report { input } => {
            let report = parse(&std::fs::read_to_string(input)?)?;
            write_report(&report, cli.format.unwrap_or(Format::Text))?;
            Ok(Outcome::Checked(report.all_passed()))
        }
        Command::ListChecks => {
            let mut out = std::io::stdout().lock();
            let width = REGISTRY.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in REGISTRY {
                writeln!(
                    out,
                    "{:<10} {:<width$}  {}",
                    c.module, c.name, c.description
                )?;
            }
            Ok(Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Outcome::Done) | Ok(Outcome::Checked(true)) => ExitCode::SUCCESS,
        Ok(Outcome::Checked(false)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
