//! Command-line front end: argument types and the commands behind the
//! `gensearch` binary. Every command renders its full output in memory
//! before anything is written.

pub mod args;
mod commands;
mod verify;

use anyhow::Result;

pub use args::{Cli, Command};

/// Rendered command output.
#[derive(Debug)]
pub struct Report {
    pub bytes: Vec<u8>,
    /// False when a verification check failed.
    pub success: bool,
}

impl Report {
    fn ok(bytes: Vec<u8>) -> Self {
        Self {
            bytes,
            success: true,
        }
    }
}

pub fn run(command: &Command) -> Result<Report> {
    Ok(match command {
        Command::Simulate(a) => Report::ok(commands::simulate(a)?),
        Command::Plan(a) => Report::ok(commands::plan(a)?),
        Command::Heatmap(a) => Report::ok(commands::heatmap_cmd(a)?),
        Command::ParallelSweep(a) => Report::ok(commands::parallel_sweep_cmd(a)?),
        Command::Montecarlo(a) => Report::ok(commands::montecarlo(a)?),
        Command::Verify => {
            let (text, success) = verify::verify()?;
            Report {
                bytes: text.into_bytes(),
                success,
            }
        }
    })
}
