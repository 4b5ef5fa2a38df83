use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sirsvk_cli::{cmd_analyze, cmd_compare, cmd_simulate, cmd_sweep, CliError, Report, RunConfig};

#[derive(Parser)]
#[command(
    name = "sirsvk",
    version,
    about = "Simulate and analyze the SIRS-V(kappa) epidemic model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory (`t,S,I,R,V`).
    Simulate(Common),
    /// Equilibria, reproduction numbers and the stability verdict.
    Analyze(Common),
    /// Run the configured confidence sweep.
    Sweep(Common),
    /// Compare SIRS, SIRSV and SIRS-V(kappa) (`t,model,S,I,R,V`).
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration. Layered over --paper-figure when both are given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Start from the published setup of figure 2, 3, 4, 5 or 6.
    #[arg(long, value_name = "N")]
    paper_figure: Option<u8>,
    /// Print the effective configuration as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let read = |path: &Path| {
        fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
    };
    match (common.paper_figure, &common.config) {
        (Some(fig), None) => RunConfig::paper_figure(fig),
        (Some(fig), Some(path)) => RunConfig::paper_figure(fig)?.overlay(&read(path)?),
        (None, Some(path)) => RunConfig::parse(&read(path)?),
        (None, None) => Err(CliError::Config("either --config or --paper-figure is required".into())),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

type Handler = fn(&RunConfig) -> Result<Report, CliError>;

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    let (common, command): (&Common, Handler) = match &cli.command {
        Command::Simulate(c) => (c, cmd_simulate),
        Command::Analyze(c) => (c, cmd_analyze),
        Command::Sweep(c) => (c, cmd_sweep),
        Command::Compare(c) => (c, cmd_compare),
    };
    let cfg = load(common)?;
    let out = common
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(|o| o.path.clone()));
    if common.dump_config {
        emit(&cfg.to_toml(), out.as_deref())?;
        return Ok(Vec::new());
    }
    let report = command(&cfg)?;
    emit(&report.csv, out.as_deref())?;
    Ok(report.failures)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in &failures {
                eprintln!("sirsvk: {f}");
            }
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("sirsvk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
