//! `pointpair`: evaluation, verification campaigns and searches from the
//! command line.
//!
//! Exit codes: 0 all pass, 1 violation found, 2 usage or input error,
//! 3 convergence warning.

mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command, Format, OutputArgs};
use commands::{CliError, Run};

const USAGE_EXIT: u8 = 2;

fn emit(text: &str, out: &OutputArgs) -> Result<(), CliError> {
    match &out.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes())
                .and_then(|_| o.flush())
                .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn finish(run: Run, out: &OutputArgs, started: Instant) -> Result<u8, CliError> {
    let mut run = run;
    run.envelope.wall_time_seconds = started.elapsed().as_secs_f64();
    let code = run.envelope.status.exit_code();
    let text = match out.format {
        Format::Report => run.envelope.to_json(),
        Format::Table => run.custom_table.unwrap_or_else(|| report::table(&run.rows)),
    };
    emit(&text, out)?;
    for n in &run.envelope.notes {
        eprintln!("note: {n}");
    }
    for s in &run.envelope.skipped {
        eprintln!("skipped: {} a={}: {}", s.bound_id, report::fmt_num(s.alpha), s.reason);
    }
    Ok(code)
}

fn run(cli: Cli, argv: &[String]) -> Result<u8, CliError> {
    let started = Instant::now();
    match &cli.command {
        Command::Eval(a) => {
            println!("{}", commands::eval(a)?);
            Ok(0)
        }
        Command::Verify(a) => finish(commands::verify(a, argv)?, &a.output, started),
        Command::Sharpness(a) => finish(commands::sharpness(a, argv)?, &a.output, started),
        Command::Quasi(a) => finish(commands::quasi(a, argv)?, &a.output, started),
        Command::Conjecture(a) => finish(commands::conjecture(a, argv)?, &a.output, started),
        Command::Specfun(a) => finish(commands::specfun(a, argv)?, &a.output, started),
        Command::Qr(a) => finish(commands::qr(a, argv)?, &a.output, started),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE_EXIT } else { 0 });
        }
    };
    // the program name varies with how it is invoked; echo only the arguments
    match run(cli, &argv[1..]) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}
