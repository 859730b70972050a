//! `csc`: build and score spelling-check benchmarks from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod args;
mod commands;
mod manifest;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }
}

impl From<csc_core::Error> for CliError {
    fn from(e: csc_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// Arguments after the subcommand, with `--jobs` removed so manifests are
/// identical across thread counts.
fn manifest_argv() -> Vec<String> {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let mut argv = Vec::with_capacity(raw.len());
    let mut iter = raw.into_iter().peekable();
    let mut seen_subcommand = false;
    while let Some(arg) = iter.next() {
        if arg == "--jobs" {
            iter.next();
            continue;
        }
        if arg.starts_with("--jobs=") {
            continue;
        }
        if !seen_subcommand {
            // The subcommand itself is recorded separately.
            seen_subcommand = true;
            continue;
        }
        argv.push(arg);
    }
    argv
}

#[cfg(feature = "parallel")]
fn init_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("note: could not size the thread pool: {e}");
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn init_jobs(jobs: Option<usize>) {
    if jobs.is_some() {
        eprintln!("note: built without the parallel feature; --jobs has no effect");
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let argv = manifest_argv();
    match cli.command {
        Command::SplitConfusion(a) => commands::split_confusion(a, argv),
        Command::Synthesize(a) => commands::synthesize(a, argv),
        Command::MakeSuite(a) => commands::make_suite(a, argv),
        Command::Correct(a) => commands::correct(a, argv),
        Command::TrainLm(a) => commands::train_lm_cmd(a, argv),
        Command::Evaluate(a) => commands::evaluate_cmd(a, argv),
        Command::Coverage(a) => commands::coverage_cmd(a, argv),
        Command::Stats(a) => commands::stats(a, argv),
        Command::Sweep(a) => commands::sweep_cmd(a, argv),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    init_jobs(cli.jobs);
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
