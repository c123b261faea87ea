//! Command-line front end: flag parsing, settings files, output emission.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{CommandFactory, FromArgMatches};

use crate::args::{Cli, Command};
use crate::config::{expand_config, resolve};
use crate::error::CliError;
use crate::output::{sidecar_path, to_json, write_atomic, Provenance, TOOL};

pub const THREADS_ENV: &str = "OTTO_SPIN_THREADS";

/// Parse `argv` (program name first), run, and return the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    match run(argv.into_iter().map(Into::into).collect()) {
        Ok(()) => 0,
        Err(Outcome::Clap(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(Outcome::Cli(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

enum Outcome {
    Clap(clap::Error),
    Cli(CliError),
}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome::Cli(e)
    }
}

fn parse(argv: Vec<OsString>) -> Result<Cli, Outcome> {
    let argv = expand_config(argv)?;
    let cmd = Cli::command().mut_subcommands(|s| s.args_override_self(true));
    let matches = cmd.try_get_matches_from(argv).map_err(Outcome::Clap)?;
    Cli::from_arg_matches(&matches).map_err(Outcome::Clap)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn run(argv: Vec<OsString>) -> Result<(), Outcome> {
    let cli = parse(argv)?;
    configure_threads()?;
    match &cli.command {
        Command::Replay(r) => replay(&r.from, r.output.as_deref()),
        cmd => run_command(cmd),
    }
}

fn run_command(cmd: &Command) -> Result<(), Outcome> {
    let resolved = resolve(cmd)?;
    let rendered = commands::execute(&resolved)?;
    let mut stdout = std::io::stdout().lock();
    let io = |e: std::io::Error| Outcome::Cli(CliError::from(e));
    let quiet_pipe = |r: std::io::Result<()>| match r {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    };
    match &resolved.output.path {
        Some(path) => {
            write_atomic(path, &rendered.bytes)?;
            if !rendered.inline_provenance {
                let prov = Provenance::new(resolved.command, &resolved.settings);
                write_atomic(&sidecar_path(path), &to_json(&prov)?)?;
            }
            if let Some(s) = &rendered.summary {
                writeln!(stdout, "{s}").map_err(io)?;
            }
        }
        None => match &rendered.summary {
            Some(s) => quiet_pipe(writeln!(stdout, "{s}")).map_err(io)?,
            None => quiet_pipe(stdout.write_all(&rendered.bytes)).map_err(io)?,
        },
    }
    Ok(())
}

/// Rebuild the argument list recorded in a provenance block and run it.
fn replay(from: &Path, output: Option<&Path>) -> Result<(), Outcome> {
    let text = std::fs::read_to_string(from)
        .map_err(|e| CliError::Usage(format!("replay {}: {e}", from.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("replay {}: {e}", from.display())))?;
    let block = doc.get("provenance").cloned().unwrap_or(doc);
    let prov: Provenance = serde_json::from_value(block).map_err(|e| {
        CliError::Usage(format!(
            "replay {}: no provenance block ({e})",
            from.display()
        ))
    })?;
    if prov.tool != TOOL || prov.command == "replay" {
        return Err(CliError::Usage(format!(
            "replay {}: not an {TOOL} provenance block",
            from.display()
        ))
        .into());
    }
    let mut argv: Vec<OsString> = vec![TOOL.into(), prov.command.clone().into()];
    for (k, v) in &prov.settings {
        match v.as_str() {
            "true" => argv.push(format!("--{k}").into()),
            "false" => {}
            v => argv.push(format!("--{k}={v}").into()),
        }
    }
    if let Some(p) = output {
        argv.push("--output".into());
        argv.push(p.as_os_str().to_owned());
    }
    let cli = parse(argv)?;
    run_command(&cli.command)
}
