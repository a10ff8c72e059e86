mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use commands::Failure;
use config::{Cli, Command};

fn run(mut cli: Cli) -> Result<(), Failure> {
    let cfg = cli.command.config_mut();
    if let Some(path) = cfg.config.clone() {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        cfg.merge_file(config::parse_config_file(&text).map_err(Failure::Usage)?)
            .map_err(Failure::Usage)?;
    }
    let cfg = cfg.clone();
    let (text, failure) = match cli.command {
        Command::Spectrum(_) => commands::spectrum_cmd(&cfg)?,
        Command::Wavefunction(_) => commands::wavefunction_cmd(&cfg)?,
        Command::Verify(_) => commands::verify_cmd(&cfg)?,
        Command::Oracle(_) => commands::oracle_cmd(&cfg)?,
        Command::Degeneracy(_) => commands::degeneracy_cmd(&cfg)?,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dksphere: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
