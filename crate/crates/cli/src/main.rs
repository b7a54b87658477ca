mod args;
mod cache;
mod commands;
mod config;
mod exit;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use exit::CliError;

/// `--config FILE` or `--config=FILE` anywhere in `argv`.
fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

fn clap_failure(e: clap::Error, code: i32) -> CliError {
    let _ = e.print();
    CliError {
        code,
        message: String::new(),
    }
}

fn parse(argv: Vec<OsString>) -> Result<Cli, CliError> {
    let original = Cli::try_parse_from(&argv);
    if let Err(e) = &original {
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            let _ = e.print();
            std::process::exit(0);
        }
    }
    let Some(path) = config_path(&argv) else {
        return original.map_err(|e| clap_failure(e, exit::USAGE));
    };
    // Flags missing from the command line may come from the file, so only
    // the subcommand has to be recognizable before injection.
    let subcommand = match &original {
        Ok(cli) => cli.command.name().to_string(),
        Err(e) if e.kind() == ErrorKind::MissingRequiredArgument => {
            subcommand_token(&argv).ok_or_else(|| CliError::usage("missing subcommand"))?
        }
        Err(_) => return Err(clap_failure(original.unwrap_err(), exit::USAGE)),
    };
    let injected = config::inject(&argv, &subcommand, &path)?;
    match Cli::try_parse_from(&injected) {
        Ok(cli) => Ok(cli),
        Err(e) => {
            let file_at_fault = match &original {
                Ok(_) => true,
                Err(_) => e.kind() != ErrorKind::MissingRequiredArgument,
            };
            Err(clap_failure(
                e,
                if file_at_fault {
                    exit::BAD_CONFIG
                } else {
                    exit::USAGE
                },
            ))
        }
    }
}

/// The subcommand name as typed, when it names a known subcommand.
fn subcommand_token(argv: &[OsString]) -> Option<String> {
    use clap::CommandFactory;
    let cmd = Cli::command();
    argv.iter()
        .skip(1)
        .map(|a| a.to_string_lossy())
        .find_map(|a| {
            cmd.find_subcommand(a.as_ref())
                .map(|s| s.get_name().to_string())
        })
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    if let Command::Cache(a) = &cli.command {
        return commands::cache_command(a, &cli.cache_dir);
    }
    let name = cli.command.name();
    let config = match &cli.command {
        Command::Compare(a) => serde_json::to_value(a),
        Command::Pairwise(a) => serde_json::to_value(a),
        Command::PureTerm(a) => serde_json::to_value(a),
        Command::Drag(a) => serde_json::to_value(a),
        Command::Unruh(a) => serde_json::to_value(a),
        Command::Cosmo(a) => serde_json::to_value(a),
        Command::Mems(a) => serde_json::to_value(a),
        Command::Cache(_) => unreachable!(),
    }
    .expect("arguments serialize");
    let dir = cli
        .out
        .clone()
        .unwrap_or_else(|| run::default_dir(name, &config));
    let mut out = run::RunDir::create(dir, name, config)?;
    let cache = cache::Cache::new(&cli.cache_dir, !cli.no_cache);
    match &cli.command {
        Command::Compare(a) => commands::compare(a, &mut out)?,
        Command::Pairwise(a) => commands::pairwise(a, &mut out)?,
        Command::PureTerm(a) => commands::pure_term(a, &mut out, &cache)?,
        Command::Drag(a) => commands::drag(a, &mut out)?,
        Command::Unruh(a) => commands::unruh(a, &mut out)?,
        Command::Cosmo(a) => commands::cosmo(a, &mut out)?,
        Command::Mems(a) => commands::mems(a, &mut out)?,
        Command::Cache(_) => unreachable!(),
    }
    let path = out.finish()?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    match parse(argv).and_then(run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code as u8)
        }
    }
}
