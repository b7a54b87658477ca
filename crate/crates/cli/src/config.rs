//! Flat TOML run files. Each key names a flag of the subcommand; the values
//! are spliced into the argument list right after the subcommand so that
//! flags typed on the command line win.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;
use crate::exit::CliError;

/// Global options that take a value, needed to find the subcommand token.
const GLOBAL_WITH_VALUE: [&str; 4] = ["--config", "--out", "--workers", "--cache-dir"];

/// Position of the subcommand in `argv` (index 0 is the program name).
fn subcommand_index(argv: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let arg = argv[i].to_string_lossy();
        if GLOBAL_WITH_VALUE.contains(&arg.as_ref()) {
            i += 2;
        } else if arg.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

fn value_to_arg(key: &str, value: &toml::Value) -> Result<Option<String>, CliError> {
    Ok(Some(match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => format!("{f:e}"),
        toml::Value::Boolean(true) => return Ok(None),
        toml::Value::Boolean(false) => {
            return Err(CliError::config(format!(
                "'{key} = false': omit the key instead"
            )))
        }
        _ => {
            return Err(CliError::config(format!(
                "'{key}' must be a string, number or boolean"
            )))
        }
    }))
}

/// Reads `path` and returns `argv` with the file's flags inserted.
pub fn inject(argv: &[OsString], subcommand: &str, path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;

    let command = Cli::command();
    let sub = command
        .find_subcommand(subcommand)
        .expect("subcommand was parsed from the same definition");
    let known: Vec<String> = sub
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect();
    let positional: Vec<String> = sub
        .get_arguments()
        .filter(|a| a.is_positional())
        .map(|a| a.get_id().to_string())
        .collect();

    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in &table {
        let flag = key.replace('_', "-");
        if positional.contains(&key.replace('-', "_")) {
            match value_to_arg(key, value)? {
                Some(v) => injected.insert(0, v.into()),
                None => return Err(CliError::config(format!("'{key}' needs a value"))),
            }
            continue;
        }
        if !known.contains(&flag) || GLOBAL_WITH_VALUE.contains(&format!("--{flag}").as_str()) {
            return Err(CliError::config(format!(
                "unknown key '{key}' for {subcommand}"
            )));
        }
        injected.push(format!("--{flag}").into());
        if let Some(v) = value_to_arg(key, value)? {
            injected.push(v.into());
        }
    }

    let at = subcommand_index(argv).expect("subcommand present") + 1;
    let mut out = argv[..at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_subcommand_after_globals() {
        assert_eq!(
            subcommand_index(&os(&["casimir", "--out", "x", "--no-cache", "cosmo"])),
            Some(4)
        );
        assert_eq!(
            subcommand_index(&os(&["casimir", "mems", "--k", "1"])),
            Some(1)
        );
    }

    #[test]
    fn file_values_come_before_command_line_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "k = 0.5\nd0 = 2e-7\nsweep = true\n").unwrap();
        let argv = os(&["casimir", "mems", "--k", "0.02"]);
        let out = inject(&argv, "mems", &path).unwrap();
        let s: Vec<String> = out
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect();
        let k_file = s.iter().position(|a| a == "0.5e0" || a == "5e-1").unwrap();
        let k_cli = s.iter().position(|a| a == "0.02").unwrap();
        assert!(k_file < k_cli);
        assert!(s.contains(&"--sweep".to_string()));
    }

    #[test]
    fn rejects_unknown_keys_and_tables() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        let argv = os(&["casimir", "cosmo"]);
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(inject(&argv, "cosmo", &path).is_err());
        std::fs::write(&path, "[section]\ncutoff_length = 1\n").unwrap();
        assert!(inject(&argv, "cosmo", &path).is_err());
        std::fs::write(&path, "cutoff_length = \n").unwrap();
        assert!(inject(&argv, "cosmo", &path).is_err());
        std::fs::write(&path, "out = \"x\"\n").unwrap();
        assert!(inject(&argv, "cosmo", &path).is_err());
    }
}
