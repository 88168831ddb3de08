use std::process::ExitCode;

use clap::Parser;
use utfw::cli::{run, Cli};
use utfw::{exit, CliError};

fn emit(cli: &Cli) -> Result<i32, CliError> {
    let outcome = run(cli)?;
    let text = outcome.report.to_json()? + "\n";
    match &cli.global.out {
        Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    if let Some(path) = &cli.global.csv {
        outcome.table.write(path)?;
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match emit(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    debug_assert!((0..=exit::CHARGE_EXCEEDS_RANGE).contains(&code));
    ExitCode::from(code as u8)
}
