use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use bec_scatter_cli::{load_config_file, run, CliError};

/// Incoherent light scattering by an interacting Bose-Einstein condensate.
#[derive(Parser, Debug)]
#[command(name = "bec-scatter", version)]
struct Args {
    /// Run configuration (JSON, or TOML with a .toml extension).
    config: PathBuf,

    /// Override a configuration key, e.g. `--override command=spectrum`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = load_config_file(&args.config, &args.overrides).and_then(|c| run(&c));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    let stderr = std::io::stderr();
    let color = std::env::var_os("NO_COLOR").is_none() && stderr.is_terminal();
    eprintln!("bec-scatter: {}", e.diagnostic(color));
    ExitCode::from(e.exit_code() as u8)
}
