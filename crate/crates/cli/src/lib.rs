//! Library side of the `qplane` binary, so the commands can be driven from tests.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use args::{Cli, Command};
use config::RunConfig;
use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Already rendered with a caret under the offending position.
    #[error("{0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let config = RunConfig::from_opts(&cli.opts)?;
    match &cli.command {
        Command::Normalize { expr } => commands::cmd_normalize(expr, &config),
        Command::Sos { mode, expr, cert } => commands::cmd_sos(expr, *mode, cert.as_deref(), &config),
        Command::Psatz { expr } => commands::cmd_psatz(expr, &config),
        Command::Op { cmd } => commands::cmd_op(cmd, &config),
        Command::Symbol { expr, grid, printed } => commands::cmd_symbol(expr, *grid, *printed, &config),
    }
}

/// Renders the report and writes `--out`; returns what goes to stdout.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let report = run(cli)?;
    let rendered = report.render(cli.opts.format)?;
    if let Some(path) = &cli.opts.out {
        let json = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
        std::fs::write(path, json + "\n").map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(rendered)
}
