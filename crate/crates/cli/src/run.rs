//! Run directories: JSON and CSV artifacts plus a manifest that pins
//! everything needed to reproduce them.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use casimir_core::constants::constant_table;
use casimir_core::geometry::density::FORMAT_VERSION;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::exit::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `casimir-runs/<subcommand>-<first 12 hex digits of the config hash>`.
pub fn default_dir(subcommand: &str, config: &Value) -> PathBuf {
    let hash = sha256_hex(format!("{subcommand}\n{config}").as_bytes());
    PathBuf::from("casimir-runs").join(format!("{subcommand}-{}", &hash[..12]))
}

/// Number formatting shared by every CSV: shortest round-trip digits,
/// exponent form outside [1e-4, 1e6).
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub struct RunDir {
    path: PathBuf,
    subcommand: String,
    config: Value,
    seeds: Vec<u64>,
    inputs: BTreeMap<String, String>,
    outputs: Vec<String>,
}

impl RunDir {
    pub fn create(path: PathBuf, subcommand: &str, config: Value) -> Result<Self, CliError> {
        fs::create_dir_all(&path)
            .map_err(|e| CliError::io(&format!("creating {}", path.display()), e))?;
        Ok(RunDir {
            path,
            subcommand: subcommand.to_string(),
            config,
            seeds: Vec::new(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        })
    }

    pub fn record_seed(&mut self, seed: u64) {
        if !self.seeds.contains(&seed) {
            self.seeds.push(seed);
        }
    }

    /// Pins an input file by content hash.
    pub fn record_input(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes =
            fs::read(path).map_err(|e| CliError::io(&format!("reading {}", path.display()), e))?;
        self.inputs
            .insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(())
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let target = self.path.join(name);
        fs::write(&target, bytes)
            .map_err(|e| CliError::io(&format!("writing {}", target.display()), e))?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(name, e))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn write_csv(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        self.write(name, text.as_bytes())
    }

    /// Writes manifest.json; call last.
    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        let constants: BTreeMap<&str, Value> = constant_table()
            .into_iter()
            .map(|(name, value, unit)| (name, json!({ "value": value, "unit": unit })))
            .collect();
        let mut outputs = self.outputs.clone();
        outputs.sort();
        let manifest = json!({
            "tool": "casimir",
            "version": env!("CARGO_PKG_VERSION"),
            "format_version": FORMAT_VERSION,
            "subcommand": self.subcommand,
            "config": self.config,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "constants": constants,
            "outputs": outputs,
        });
        self.write_json("manifest.json", &manifest)?;
        Ok(self.path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.0,
            1.0,
            -0.25,
            1e-35,
            6.24e115,
            123456.789,
            2.5e-7,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1e-35), "1e-35");
        assert_eq!(num(0.5), "0.5");
    }

    #[test]
    fn default_dir_depends_on_config() {
        let a = default_dir("cosmo", &json!({"cutoff_length": 1e-35}));
        let b = default_dir("cosmo", &json!({"cutoff_length": 2e-35}));
        assert_ne!(a, b);
        assert_eq!(a, default_dir("cosmo", &json!({"cutoff_length": 1e-35})));
        assert!(a.to_string_lossy().starts_with("casimir-runs/cosmo-"));
    }
}
