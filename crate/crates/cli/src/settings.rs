//! Optional `key=value` configuration files and flag/config/default
//! resolution. Flags always win; config values override built-in defaults.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Keys recognized in a config file (anything else is rejected to catch
/// typos): `trials`, `list_size`, `seed`, `mu`, `coset`, `threads`,
/// `max_failures`.
const KNOWN_KEYS: &[&str] = &[
    "trials",
    "list_size",
    "seed",
    "mu",
    "coset",
    "threads",
    "max_failures",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected key=value, got {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "{}:{}: unknown config key {key:?}",
                    path.display(),
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Usage(format!("config key {key}={raw:?} is not a valid value"))
            }),
        }
    }

    /// flag > config > default.
    pub fn resolve<T: FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    pub fn resolve_optional<T: FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    /// Coset flag: accepts on/off/true/false in the config file.
    pub fn resolve_coset(&self, flag: Option<bool>, default: bool) -> Result<bool, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get("coset").map(String::as_str) {
            None => Ok(default),
            Some("on") | Some("true") => Ok(true),
            Some("off") | Some("false") => Ok(false),
            Some(other) => Err(CliError::Usage(format!(
                "config key coset={other:?} must be on/off"
            ))),
        }
    }
}

/// Worker-count resolution: `--threads` > config `threads` > `QPI_THREADS` >
/// all available cores.
pub fn resolve_threads(flag: Option<usize>, cfg: &FileConfig) -> Result<Option<usize>, CliError> {
    if let Some(t) = flag {
        return Ok(Some(t));
    }
    if let Some(t) = cfg.resolve_optional::<usize>(None, "threads")? {
        return Ok(Some(t));
    }
    match std::env::var("QPI_THREADS") {
        Ok(raw) => raw
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("QPI_THREADS={raw:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}
