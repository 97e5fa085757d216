use std::process::ExitCode;

use clap::Parser;
use condscreen_cli::{run, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(&cli).and_then(|config| run(&config).map(|_| config));
    match result {
        Ok(config) => {
            if !config.quiet {
                eprintln!("wrote {}", config.output_path.display());
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Config(lines)) => {
            for line in lines {
                eprintln!("error: {line}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}
