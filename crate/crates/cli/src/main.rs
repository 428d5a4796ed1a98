use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use fnls::parallel::Execution;

mod args;
mod commands;
mod output;

use args::{Cli, Command};
use commands::{Outcome, UsageError};
use output::RunManifest;

fn execution(jobs: Option<usize>) -> Result<Execution> {
    match jobs {
        None => Ok(Execution::default()),
        Some(0) => Err(UsageError("--jobs must be at least 1".into()).into()),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(k) => {
            fnls::parallel::init_threads(k)?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Execution::Sequential),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Constants { .. } => "constants",
        Command::Profile { .. } => "profile",
        Command::Pohozaev { .. } => "pohozaev",
        Command::Spectrum { .. } => "spectrum",
        Command::StabilityMap { .. } => "stability-map",
        Command::Variational { .. } => "variational",
        Command::Simulate { .. } => "simulate",
        Command::Verify { .. } => "verify",
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(UsageError(format!("--tol must lie in (0, 1), got {t}")).into());
        }
    }
    let exec = execution(cli.jobs)?;
    let fmt = cli.format;
    match &cli.command {
        Command::Constants { n, s, omega } => commands::constants(*n, *s, *omega, cli.tol, fmt),
        Command::Profile { params, r_range } => commands::profile(params, r_range, exec, fmt),
        Command::Pohozaev { params } => commands::pohozaev(params, fmt),
        Command::Spectrum { params } => commands::spectrum(params, fmt),
        Command::StabilityMap { n, omega, s_range, sigma_range } => {
            commands::stability(*n, *omega, s_range, sigma_range, exec, fmt)
        }
        Command::Variational { params, scales } => commands::variational(params, scales, cli.tol, exec, fmt),
        Command::Simulate { config } => commands::simulate(config, fmt),
        Command::Verify { full } => commands::verify(*full, exec, fmt, cli.out.is_some()),
    }
}

/// Usage errors are bad flags, unreadable inputs and parameters outside the admissible range.
fn is_usage(err: &anyhow::Error) -> bool {
    if err.downcast_ref::<UsageError>().is_some() {
        return true;
    }
    matches!(
        err.downcast_ref::<fnls::Error>(),
        Some(fnls::Error::InvalidParams(_) | fnls::Error::Domain { .. } | fnls::Error::UnsupportedDimension(_))
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if is_usage(&e) { 2 } else { 1 });
        }
    };
    let manifest = RunManifest {
        command: command_name(&cli.command).into(),
        parameters: outcome.parameters,
        code_version: format!("fnls {}", env!("CARGO_PKG_VERSION")),
        timestamp: chrono::Utc::now().to_rfc3339(),
        outputs: Vec::new(),
        summary: outcome.summary,
    };
    if let Err(e) = output::emit(cli.out.as_deref(), &outcome.artifacts, manifest) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if outcome.failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &outcome.failed {
            eprintln!("invariant failed: {f}");
        }
        ExitCode::from(1)
    }
}
