//! `heiskor`: command-line front end for the `heiskor-core` checks.
//!
//! Exit codes: 0 success, 2 configuration error, 3 certification or
//! tolerance failure, 4 I/O error. Failures print one JSON record on stderr.

mod args;
mod commands;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::Cli;
use commands::Outcome;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Certification(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Certification(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Certification(_) => "certification",
            CliError::Io(_) => "io",
        }
    }

    fn report(&self, command: Option<&str>) -> ExitCode {
        let rec = json!({
            "error": { "kind": self.kind(), "message": self.to_string() },
            "command": command,
            "exit_code": self.code(),
        });
        eprintln!("{rec}");
        ExitCode::from(self.code())
    }
}

impl From<heiskor_core::Error> for CliError {
    fn from(e: heiskor_core::Error) -> Self {
        use heiskor_core::Error as E;
        match e {
            E::Domain(_) | E::Precondition(_) | E::InsufficientScales(_) | E::DegenerateMeasure(_) => {
                CliError::Config(e.to_string())
            }
            E::NonConvergence { .. } | E::CrossValidation(_) | E::Certification(_) | E::Underflow(_) => {
                CliError::Certification(e.to_string())
            }
        }
    }
}

/// Reads `HEISKOR_THREADS` and sizes the global worker pool.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HEISKOR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("HEISKOR_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size worker pool: {e}")))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let meta = json!({
        "tool": "heiskor",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command.name(),
        "params": serde_json::to_value(&cli.command).expect("arguments serialise"),
        "seed": cli.seed,
        "format": cli.format,
    });
    let start = Instant::now();
    let Outcome { payload, failure } = commands::run(&cli.command, cli.seed)?;
    let runtime = start.elapsed().as_secs_f64();
    let text = output::render(&payload, cli.format, &meta).map_err(|e| CliError::Io(e.to_string()))?;

    match &cli.output {
        Some(path) => {
            write_file(path, &text)?;
            let sidecar = json!({
                "meta": meta,
                "output": path,
                "status": if failure.is_some() { "tolerance_failure" } else { "ok" },
                "runtime_seconds": runtime,
                "threads": rayon::current_num_threads(),
            });
            let body = serde_json::to_string_pretty(&sidecar).expect("json values serialise") + "\n";
            write_file(&sidecar_path(path), &body)?;
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    match failure {
        Some(msg) => Err(CliError::Certification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if matches!(e.kind(), ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
            }
            return CliError::Config(e.render().to_string().trim_end().to_string()).report(None);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(Some(cli.command.name())),
    }
}
