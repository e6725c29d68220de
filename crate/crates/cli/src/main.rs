#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::Cli;
use report::RunReport;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let report = RunReport {
        command: cli.command.name().to_string(),
        inputs: serde_json::json!({"args": cli.command, "json": cli.json, "csv": cli.csv}),
        results: outcome.results.clone(),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    if let Some(path) = &cli.csv {
        if let Err(e) = report::write_csv(path, &outcome.table) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = std::io::stdout().lock();
    let written = if cli.json {
        match report.to_json() {
            Ok(s) => writeln!(out, "{s}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    } else {
        report.render_human(&mut out)
    };
    if written.is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
