//! Layered settings: command-line flags over a JSON config file over
//! built-in defaults.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Flat JSON object whose keys are flag names in snake case
/// (`beta_lo` for `--beta-lo`).
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: Map<String, Value>,
    used: RefCell<BTreeSet<String>>,
}

impl ConfigFile {
    pub fn read(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        match serde_json::from_str(text) {
            Ok(Value::Object(values)) => Ok(ConfigFile {
                values,
                used: RefCell::default(),
            }),
            Ok(_) => Err(CliError::config("config file must hold a JSON object")),
            Err(e) => Err(CliError::config(e.to_string())),
        }
    }

    /// The flag value if given, else the config value, else `None`.
    pub fn opt<T: DeserializeOwned>(&self, key: &str, flag: Option<T>) -> CliResult<Option<T>> {
        self.used.borrow_mut().insert(key.to_string());
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| CliError::config(format!("config key `{key}`: {e}"))),
        }
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str, flag: Option<T>, default: T) -> CliResult<T> {
        Ok(self.opt(key, flag)?.unwrap_or(default))
    }

    /// Fails on config keys that the command never asked for.
    pub fn finish(&self) -> CliResult<()> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self
            .values
            .keys()
            .filter(|k| !used.contains(k.as_str()))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::config(format!("unknown config keys: {}", unknown.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_config_beats_default() {
        let cfg = ConfigFile::parse(r#"{"delta": 0.25, "seed": 9}"#).unwrap();
        assert_eq!(cfg.get("delta", Some(0.5), 1.0).unwrap(), 0.5);
        assert_eq!(cfg.get("delta", None, 1.0).unwrap(), 0.25);
        assert_eq!(cfg.get::<u64>("seed", None, 0).unwrap(), 9);
        assert_eq!(cfg.get("window", None, 10usize).unwrap(), 10);
        cfg.finish().unwrap();
    }

    #[test]
    fn unknown_and_mistyped_keys_are_config_errors() {
        let cfg = ConfigFile::parse(r#"{"delta": "big", "colour": 1}"#).unwrap();
        assert!(cfg.get::<f64>("delta", None, 1.0).is_err());
        assert!(matches!(cfg.finish(), Err(CliError::Config(m)) if m.contains("colour")));
        assert!(ConfigFile::parse("[1]").is_err());
    }
}
