//! Command-line entry point.
//!
//! Exit codes: 0 = ok, 2 = config error, 3 = blow-up, 4 = i/o error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qrvm::config::{parse_config, TimeControl};
use qrvm::error::QrvmError;
use qrvm::run::{run, RunOutcome};
use qrvm::Scheme;

#[derive(Parser)]
#[command(name = "qrvm", version, about = "1D quasi-relativistic Vlasov-Maxwell solver")]
struct Cli {
    /// Path to the run configuration (key = value lines)
    #[arg(long)]
    config: PathBuf,

    /// Overrides the configured output directory
    #[arg(long)]
    output_dir: Option<PathBuf>,

    /// Overrides the configured scheme
    #[arg(long)]
    scheme: Option<String>,

    /// Suppress progress output
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(default_level))
        .format_timestamp(None)
        .init();

    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(dir) = cli.output_dir {
        cfg.output_dir = dir;
    }
    if let Some(name) = cli.scheme.as_deref() {
        match Scheme::parse(name) {
            Some(s) => {
                if s.uses_cfl() != cfg.scheme.uses_cfl() {
                    // the configured time control belongs to the other
                    // family; fall back to the new family's default
                    cfg.time = if s.uses_cfl() {
                        TimeControl::Cfl(0.9)
                    } else {
                        TimeControl::FixedDt(0.5 * cfg.dx())
                    };
                    log::info!("scheme override {name}: time control reset to family default");
                }
                cfg.scheme = s;
            }
            None => {
                eprintln!("error: unknown scheme `{name}`");
                return ExitCode::from(2);
            }
        }
    }

    match run(&cfg) {
        Ok(report) => match report.outcome {
            RunOutcome::Completed => {
                log::info!(
                    "completed: {} steps to t = {:.6}, {} snapshots, {} diagnostics rows",
                    report.steps,
                    report.final_t,
                    report.snapshots,
                    report.diag_rows
                );
                if report.clamped_feet > 0 {
                    log::warn!(
                        "{} semi-Lagrangian feet clamped at the p-boundary",
                        report.clamped_feet
                    );
                }
                ExitCode::SUCCESS
            }
            RunOutcome::BlowUp { t, max_abs } => {
                eprintln!("blow-up at t = {t:.6} (max |f| = {max_abs:.3e})");
                ExitCode::from(3)
            }
        },
        Err(e @ QrvmError::Io { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
        Err(e @ (QrvmError::Config { .. } | QrvmError::InvalidParams(_)
            | QrvmError::InvalidGrid(_) | QrvmError::InvalidTimeStep { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
