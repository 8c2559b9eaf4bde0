use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use gensearch_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|report| {
        match cli.command.out_path() {
            Some(path) => std::fs::write(path, &report.bytes)
                .with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(&report.bytes)?,
        }
        Ok(report.success)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
