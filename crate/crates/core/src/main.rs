use std::fs;
use std::process::ExitCode;

use clap::Parser;
use qangle::cli::{exit_code, run, Cli};
use qangle::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
