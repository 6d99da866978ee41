mod args;
mod commands;
mod fail;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command, Config, Format, Settings};
use fail::{CliError, CliResult};
use report::{Inputs, RunReport};

fn load_config(cli: &Cli) -> CliResult<Config> {
    let Some(path) = &cli.config else {
        return Ok(Config::default());
    };
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> CliResult<u8> {
    let start = Instant::now();
    let settings = Settings::resolve(cli, load_config(cli)?);
    if let Some(t) = settings.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Parse(format!("--threads: {e}")))?;
    }
    let mut inputs = Inputs::default();
    let outcome = match &cli.command {
        Command::Dual { star, permanent } => commands::dual(&mut inputs, star, *permanent)?,
        Command::Injective { star } => commands::injective(&mut inputs, star)?,
        Command::Symmetry { star } => commands::symmetry(&mut inputs, star)?,
        Command::Shapes(a) => commands::shapes(a)?,
        Command::Fano(f) => commands::fano(f, settings.seed)?,
        Command::Sim(s) => commands::sim(s, &mut inputs)?,
    };
    match settings.format {
        Format::Text => print!("{}", outcome.text),
        Format::Json => {
            let report = RunReport {
                command: std::env::args().skip(1).collect(),
                seed: settings.seed,
                inputs: inputs.digests,
                outputs: outcome.outputs,
                wall_time_ms: (start.elapsed().as_secs_f64() * 1e6).round() / 1e3,
                version: env!("CARGO_PKG_VERSION"),
            };
            let body = serde_json::to_string_pretty(&report).map_err(|e| CliError::Parse(e.to_string()))?;
            println!("{body}");
        }
    }
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
