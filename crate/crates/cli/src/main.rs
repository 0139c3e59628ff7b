use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use fhmux_cli::args::{Cli, Command};
use fhmux_cli::commands::{
    blocking_rows, bounds_metadata, bounds_rows, capacity_rows, pmf_rows, simulate_rows,
};
use fhmux_cli::config::RunConfig;
use fhmux_cli::output::{emit, render, Metadata};
use fhmux_cli::validate::{self, Context};
use fhmux_cli::Result;

const EXIT_USAGE: u8 = 1;
const EXIT_ACCEPTANCE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = RunConfig::resolve(&cli.common)?;
    let bytes = config.install(|| -> Result<Option<Vec<u8>>> {
        let out = match &cli.command {
            Command::Blocking(args) => render(
                &blocking_rows(&config, args)?,
                &Metadata::new("blocking", &config),
                config.format,
            )?,
            Command::Bounds(args) => render(
                &bounds_rows(&config, args)?,
                &bounds_metadata(&config, args),
                config.format,
            )?,
            Command::Capacity(args) => render(
                &capacity_rows(&config, args)?,
                &Metadata::new("capacity", &config),
                config.format,
            )?,
            Command::Simulate(args) => render(
                &simulate_rows(&config, args)?,
                &Metadata::new("simulate", &config),
                config.format,
            )?,
            Command::Pmf(args) => render(
                &pmf_rows(&config, args)?,
                &Metadata::new("pmf", &config),
                config.format,
            )?,
            Command::Validate(_) => return Ok(None),
        };
        Ok(Some(out))
    })??;

    if let Some(bytes) = bytes {
        emit(&bytes, &config)?;
        return Ok(ExitCode::SUCCESS);
    }

    let Command::Validate(args) = &cli.command else {
        unreachable!("only validate produces no table");
    };
    let ctx = Context {
        params: config.params,
        seed: config.seed,
    };
    let mut all_passed = true;
    for criterion in validate::criteria() {
        if !args.only.is_empty() && !args.only.contains(&criterion.id) {
            continue;
        }
        let report = config.install(|| criterion.run(&ctx))?;
        println!("{}", report.line());
        all_passed &= report.passed;
    }
    println!("{}", if all_passed { "ALL PASS" } else { "FAILURES" });
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_ACCEPTANCE)
    })
}
