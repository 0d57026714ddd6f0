//! `cylbif`: command-line driver for `cylbif-core`.
//!
//! Exit codes: 0 success, 1 numerical or i/o failure, 2 usage error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod config;
mod format;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{CliError, RunConfig};

fn main() -> ExitCode {
    let cli = cli::Cli::parse();
    match RunConfig::from_cli(cli).and_then(|cfg| {
        if let Some(n) = cfg.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?;
        }
        commands::run(&cfg)
    }) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cylbif: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
