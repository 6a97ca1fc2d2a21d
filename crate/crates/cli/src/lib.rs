//! Command-line front end for the amflow simulator.

pub mod args;
pub mod commands;
pub mod report;
pub mod svg;

use args::{Cli, Command, Common, OutputFormat};
use clap::Parser;
use commands::CliError;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Shift(a) => &a.common,
        Command::Flux(a) => &a.common,
        Command::Momentum(a) => &a.common,
        Command::Sweep(a) => &a.common,
        Command::Backward(a) => &a.common,
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let (mut report, plot) = match &cli.command {
        Command::Shift(a) => commands::shift(a),
        Command::Flux(a) => commands::flux(a),
        Command::Momentum(a) => commands::momentum(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Backward(a) => commands::backward(a),
    }?;
    let c = common(&cli.command);
    if let (Some(path), Some(plot)) = (&c.svg, plot) {
        let start = Instant::now();
        std::fs::write(path, svg::render(&plot))?;
        report
            .timings
            .insert("svg".into(), start.elapsed().as_secs_f64());
    }
    match c.output {
        OutputFormat::Json => report.write_json(&mut *out).map_err(std::io::Error::from)?,
        OutputFormat::Csv => report.write_csv(&mut *out).map_err(std::io::Error::from)?,
    }
    Ok(())
}

/// Parse `argv`, run, write the report to `out`; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("see `amflow --help`");
            }
            e.exit_code()
        }
    }
}
