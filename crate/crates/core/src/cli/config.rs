use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hilbert::{build_model, ModelSpec};

pub const DEFAULT_M: i64 = 2;
pub const DEFAULT_TIMES: [f64; 3] = [0.0, 0.7, 3.9];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Keys accepted in a `--config` TOML file. Same names as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "M")]
    pub m: Option<i64>,
    pub t: Option<Vec<f64>>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tol: BTreeMap<String, f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Values given on the command line; `None` means "not given".
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub m: Option<i64>,
    pub t: Option<Vec<f64>>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tol: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub times: Vec<f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    /// Flags win over the file, the file wins over defaults.
    pub fn resolve(flags: Overrides, file: FileConfig) -> Result<Self> {
        let model = build_model(flags.m.or(file.m).unwrap_or(DEFAULT_M))?;
        let times = flags.t.or(file.t).unwrap_or_else(|| DEFAULT_TIMES.to_vec());
        if times.is_empty() {
            return Err(Error::Config("time grid is empty".into()));
        }
        if let Some(bad) = times.iter().find(|t| !t.is_finite()) {
            return Err(Error::Config(format!("time {bad} is not finite")));
        }
        let mut tolerances = file.tol;
        tolerances.extend(flags.tol);
        for (name, &tol) in &tolerances {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Config(format!(
                    "tolerance {name}={tol} must be positive"
                )));
            }
        }
        Ok(RunConfig {
            model,
            times,
            tolerances,
            format: flags.format.or(file.format).unwrap_or_default(),
            out: flags.out.or(file.out),
            seed: flags.seed.or(file.seed).unwrap_or(0),
        })
    }

    pub fn with_model(m: i64) -> Result<Self> {
        Self::resolve(
            Overrides {
                m: Some(m),
                ..Default::default()
            },
            FileConfig::default(),
        )
    }

    /// Rejects tolerance names the command does not know.
    pub fn check_tolerance_names(&self, known: &[(&str, f64)]) -> Result<()> {
        for name in self.tolerances.keys() {
            if !known.iter().any(|(k, _)| k == name) {
                let names: Vec<&str> = known.iter().map(|(k, _)| *k).collect();
                return Err(Error::Config(format!(
                    "unknown tolerance '{name}'; expected one of: {}",
                    names.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// Parses `name=value`.
pub fn parse_tolerance(arg: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = arg
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{arg}'"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad tolerance value '{value}': {e}"))?;
    Ok((name.trim().to_string(), value))
}
