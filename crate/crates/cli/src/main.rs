mod args;
mod commands;

use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::{Cli, Command, Merge};

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;
pub const EXIT_IO: u8 = 4;

pub type CmdResult<T = ()> = Result<T, Failure>;

pub fn usage(msg: impl Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        error: anyhow!("{msg}"),
    }
}

pub fn precondition(msg: impl Display) -> Failure {
    Failure {
        code: EXIT_PRECONDITION,
        error: anyhow!("{msg}"),
    }
}

/// Tags an error with its exit code.
pub trait Classify<T> {
    fn usage(self) -> CmdResult<T>;
    fn precondition(self) -> CmdResult<T>;
    fn io(self) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> CmdResult<T> {
        self.map_err(|e| Failure { code: EXIT_USAGE, error: e.into() })
    }
    fn precondition(self) -> CmdResult<T> {
        self.map_err(|e| Failure { code: EXIT_PRECONDITION, error: e.into() })
    }
    fn io(self) -> CmdResult<T> {
        self.map_err(|e| Failure { code: EXIT_IO, error: e.into() })
    }
}

fn read_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> CmdResult<T> {
    let Some(path) = path else { return Ok(T::default()) };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .io()?;
    serde_json::from_str(&text)
        .with_context(|| format!("config {}", path.display()))
        .usage()
}

/// Merges flags over the config file, then either prints the result or runs.
fn resolve<T>(
    flags: T,
    config: Option<&Path>,
    defaults: impl FnOnce(T) -> T,
    print: bool,
) -> CmdResult<Option<T>>
where
    T: Merge + Serialize + DeserializeOwned + Default,
{
    let resolved = defaults(flags.merge(read_config(config)?));
    if print {
        println!("{}", serde_json::to_string_pretty(&resolved).expect("configs serialize"));
        return Ok(None);
    }
    Ok(Some(resolved))
}

fn configure_threads() -> CmdResult {
    let Ok(value) = std::env::var("DEADZONE_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("DEADZONE_THREADS must be a positive integer, got {value:?}")))?;
    // only fails if a pool already exists, which cannot happen this early
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    let config = cli.config.as_deref();
    let print = cli.print_config;
    match cli.command {
        Command::Effective(a) => {
            if let Some(a) = resolve(a, config, |a| a, print)? {
                commands::effective(a)?;
            }
        }
        Command::Raster(a) => {
            if let Some(a) = resolve(a, config, |a| a.with_defaults(), print)? {
                commands::raster(a)?;
            }
        }
        Command::Simulate(a) => {
            if let Some(a) = resolve(a, config, |a| a.with_defaults(), print)? {
                commands::simulate(a)?;
            }
        }
        Command::Realize(a) => {
            if let Some(a) = resolve(a, config, |a| a.with_defaults(), print)? {
                commands::realize(a)?;
            }
        }
        Command::Catalog(a) => {
            if let Some(a) = resolve(a, config, |a| a.with_defaults(), print)? {
                commands::catalog(a)?;
            }
        }
        Command::Verify(a) => {
            if let Some(a) = resolve(a, config, |a| a, print)? {
                commands::verify(a)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
