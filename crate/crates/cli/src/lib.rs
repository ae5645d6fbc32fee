//! Command-line front end: argument handling, output envelopes and the
//! command implementations behind the `photon-clusters` binary.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::config::Config;
use crate::error::{usage, CliError};
use crate::output::{Format, DEFAULT_PRECISION, PRECISION_ENV};

/// Significant digits from the environment override, if any.
pub fn precision_from_env(value: Option<&str>) -> Result<usize, CliError> {
    match value {
        None => Ok(DEFAULT_PRECISION),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(p) if (1..=DEFAULT_PRECISION).contains(&p) => Ok(p),
            _ => Err(usage(format!(
                "{PRECISION_ENV} must be an integer in 1..=17, got `{s}`"
            ))),
        },
    }
}

/// Runs one invocation. `argv` excludes the program name. The rendered
/// output goes to `--out` or to `stdout`.
pub fn run(argv: &[String], precision: usize, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cli = Cli::try_parse_from(std::iter::once("photon-clusters".to_string()).chain(argv.iter().cloned())).map_err(
        |e| match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                CliError::Display(e.render().to_string())
            }
            _ => {
                let text = e.render().to_string();
                let first = text.lines().next().unwrap_or_default();
                CliError::Usage(first.trim_start_matches("error: ").to_string())
            }
        },
    )?;
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let command = argv.join(" ");
    let (doc, output, failed) = match &cli.command {
        Command::Pmf(a) => (commands::pmf(a, &config, &command, precision)?, &a.output, 0),
        Command::Spectrum(a) => (commands::spectrum(a, &config, &command, precision)?, &a.output, 0),
        Command::Constants(a) => (commands::constants(&command, precision)?, a, 0),
        Command::Sample(a) => (commands::sample(a, &config, &command, precision)?, &a.output, 0),
        Command::Verify(a) => {
            let (doc, failed) = commands::run_verify(a, &config, &command, precision)?;
            (doc, &a.output, failed)
        }
    };
    let format = config.or_enum(output.format, "format")?.unwrap_or(Format::Csv);
    let text = doc.render(format)?;
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub struct BookChapter;
