//! Run configuration: command-line flags over a `key = value` file over
//! built-in defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nu_min: f64,
    pub nu_max: f64,
    pub nu_step: f64,
    pub minimize: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { nu_min: 0.0, nu_max: 0.13, nu_step: 0.0025, minimize: false, seed: 1, out: None, workers: None }
    }
}

/// Values given on the command line; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub nu_min: Option<f64>,
    pub nu_max: Option<f64>,
    pub nu_step: Option<f64>,
    pub minimize: bool,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

const KEYS: [&str; 7] = ["nu_min", "nu_max", "nu_step", "minimize", "seed", "out", "workers"];

/// Parses `key = value` lines; `#` starts a comment. Dashes in keys are
/// accepted as underscores.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", no + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", no + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!("config key {key}: expected a boolean, got {v:?}"))),
    }
}

impl RunConfig {
    pub fn resolve(config_file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = config_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
            for (k, v) in parse_config(&text)? {
                match k.as_str() {
                    "nu_min" => cfg.nu_min = parse_value(&k, &v)?,
                    "nu_max" => cfg.nu_max = parse_value(&k, &v)?,
                    "nu_step" => cfg.nu_step = parse_value(&k, &v)?,
                    "minimize" => cfg.minimize = parse_bool(&k, &v)?,
                    "seed" => cfg.seed = parse_value(&k, &v)?,
                    "out" => cfg.out = Some(PathBuf::from(v)),
                    "workers" => cfg.workers = Some(parse_value(&k, &v)?),
                    _ => unreachable!("keys checked while parsing"),
                }
            }
        }
        cfg.nu_min = flags.nu_min.unwrap_or(cfg.nu_min);
        cfg.nu_max = flags.nu_max.unwrap_or(cfg.nu_max);
        cfg.nu_step = flags.nu_step.unwrap_or(cfg.nu_step);
        cfg.minimize |= flags.minimize;
        cfg.seed = flags.seed.unwrap_or(cfg.seed);
        cfg.out = flags.out.clone().or(cfg.out);
        cfg.workers = flags.workers.or(cfg.workers);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(0.0 <= self.nu_min && self.nu_min < self.nu_max && self.nu_max <= 1.0) {
            return Err(CliError::Usage(format!(
                "need 0 <= nu_min < nu_max <= 1, got {} and {}",
                self.nu_min, self.nu_max
            )));
        }
        if self.nu_step.is_nan() || self.nu_step <= 0.0 {
            return Err(CliError::Usage(format!("nu_step must be positive, got {}", self.nu_step)));
        }
        if self.workers == Some(0) {
            return Err(CliError::Usage("workers must be at least 1".into()));
        }
        Ok(())
    }
}
