use std::process::ExitCode;

use advice_soco::cli::Cli;
use advice_soco::commands::execute;
use advice_soco::error::{CliError, CliResult};
use advice_soco::format::emit;
use advice_soco::settings::ConfigFile;
use clap::Parser;

fn main_inner(cli: &Cli) -> CliResult<()> {
    let cfg = ConfigFile::read(cli.config.as_deref())?;
    let output = execute(cli, &cfg)?;
    emit(cli.out.as_deref(), &output.text)?;
    match output.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("advice-soco: {e}");
            ExitCode::from(exit_byte(&e))
        }
    }
}

fn exit_byte(e: &CliError) -> u8 {
    u8::try_from(e.exit_code()).unwrap_or(1)
}
