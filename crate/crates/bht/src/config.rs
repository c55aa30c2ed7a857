//! Flat `key=value` run configuration with `#` comments; resolution order is
//! flag > config file > built-in default.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{BhtError, Result};

#[derive(Debug, Clone, Default)]
pub struct Config {
    map: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        Config::parse(&text)
    }

    /// Loads `bht.conf` from the working directory when present.
    pub fn load_default() -> Config {
        match std::fs::read_to_string("bht.conf") {
            Ok(text) => Config::parse(&text).unwrap_or_default(),
            Err(_) => Config::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(BhtError::Parse(format!(
                    "config line {} is not key=value: `{line}`",
                    lineno + 1
                )));
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config { map })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Option<T> {
        self.map.get(key).and_then(|v| v.parse().ok())
    }

    /// flag > config > default
    pub fn resolve<T: FromStr + Clone>(&self, flag: Option<T>, key: &str, default: T) -> T {
        flag.unwrap_or_else(|| self.get(key).unwrap_or(default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_precedence() {
        let c = Config::parse("# comment\nseed = 42\nout_dir=scans\n\ntrials=7\n").unwrap();
        assert_eq!(c.get::<u64>("seed"), Some(42));
        assert_eq!(c.get::<String>("out_dir"), Some("scans".into()));
        // flag wins
        assert_eq!(c.resolve(Some(9u64), "seed", 1), 9);
        // config wins over default
        assert_eq!(c.resolve(None, "seed", 1), 42);
        // default as fallback
        assert_eq!(c.resolve::<u64>(None, "missing", 5), 5);
        assert!(Config::parse("notakv").is_err());
    }
}
