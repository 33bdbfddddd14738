//! Flag / config-file / default resolution.
//!
//! The config file is a flat `key=value` text format whose keys mirror the
//! long flag names (without leading dashes). Precedence: command-line flag,
//! then config file, then built-in default. Keys the active command does not
//! consume are rejected by name.

use std::collections::{HashMap, HashSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::errors::CliError;

pub struct Resolver {
    cfg: HashMap<String, String>,
    consumed: HashSet<String>,
    resolved: Vec<(String, String)>,
}

impl Resolver {
    pub fn new(config_path: Option<&Path>) -> Result<Resolver, CliError> {
        let mut cfg = HashMap::new();
        if let Some(path) = config_path {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Validation(format!("cannot read config file {}: {e}", path.display()))
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(CliError::Validation(format!(
                        "config line {} is not `key=value`: `{line}`",
                        lineno + 1
                    )));
                };
                let key = key.trim().to_string();
                if cfg.insert(key.clone(), value.trim().to_string()).is_some() {
                    return Err(CliError::Validation(format!(
                        "duplicate config key `{key}` (line {})",
                        lineno + 1
                    )));
                }
            }
        }
        Ok(Resolver { cfg, consumed: HashSet::new(), resolved: Vec::new() })
    }

    fn record<T: Display>(&mut self, key: &str, value: &T) {
        self.resolved.push((key.to_string(), value.to_string()));
    }

    fn cfg_value<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        self.consumed.insert(key.to_string());
        match self.cfg.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Validation(format!("config key `{key}` has invalid value `{raw}`"))
            }),
        }
    }

    /// Required value with an optional built-in default.
    pub fn value<T: FromStr + Display>(
        &mut self,
        flag: Option<T>,
        key: &str,
        default: Option<T>,
    ) -> Result<T, CliError> {
        // the key is recognized even when the flag takes precedence
        self.consumed.insert(key.to_string());
        let v = match flag {
            Some(v) => v,
            None => match self.cfg_value::<T>(key)? {
                Some(v) => v,
                None => default.ok_or_else(|| {
                    CliError::Validation(format!(
                        "missing required setting `{key}` (flag --{key} or config key)"
                    ))
                })?,
            },
        };
        self.record(key, &v);
        Ok(v)
    }

    /// Optional value without a default; absent stays absent.
    pub fn optional<T: FromStr + Display>(
        &mut self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        self.consumed.insert(key.to_string());
        let v = match flag {
            Some(v) => Some(v),
            None => self.cfg_value::<T>(key)?,
        };
        if let Some(ref v) = v {
            self.record(key, v);
        }
        Ok(v)
    }

    /// String restricted to an allowed set.
    pub fn choice(
        &mut self,
        flag: Option<String>,
        key: &str,
        allowed: &[&str],
        default: &str,
    ) -> Result<String, CliError> {
        let v = self.value(flag, key, Some(default.to_string()))?;
        if allowed.contains(&v.as_str()) {
            Ok(v)
        } else {
            Err(CliError::Validation(format!(
                "setting `{key}` must be one of {allowed:?} (got `{v}`)"
            )))
        }
    }

    /// Worker count: flag, config, then the ZETADYN_WORKERS environment
    /// variable, then 1.
    pub fn workers(&mut self, flag: Option<usize>) -> Result<usize, CliError> {
        let env_default = match std::env::var("ZETADYN_WORKERS") {
            Ok(raw) => Some(raw.parse::<usize>().map_err(|_| {
                CliError::Validation(format!("ZETADYN_WORKERS has invalid value `{raw}`"))
            })?),
            Err(_) => None,
        };
        let v = self.value(flag, "workers", Some(env_default.unwrap_or(1)))?;
        if v == 0 {
            return Err(CliError::Validation("setting `workers` must be >= 1".into()));
        }
        Ok(v)
    }

    /// Rejects unconsumed config keys and returns the resolved pairs,
    /// sorted by key.
    pub fn finish(mut self) -> Result<Vec<(String, String)>, CliError> {
        let mut unknown: Vec<&String> =
            self.cfg.keys().filter(|k| !self.consumed.contains(*k)).collect();
        unknown.sort();
        if let Some(k) = unknown.first() {
            return Err(CliError::Validation(format!("unknown configuration key `{k}`")));
        }
        self.resolved.sort();
        self.resolved.dedup();
        Ok(self.resolved)
    }
}
