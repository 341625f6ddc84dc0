//! Flat key=value config file with CLI-flag overrides.
//!
//! Precedence: command-line flag, then config file, then the documented
//! default. Keys use the long flag names with underscores, e.g.
//! `min_answers=1`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Config::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got {line:?}", idx + 1);
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// flag > config > default
    pub fn string(&self, flag: Option<&str>, key: &str, default: &str) -> String {
        flag.map(str::to_string)
            .or_else(|| self.get(key).map(str::to_string))
            .unwrap_or_else(|| default.to_string())
    }

    pub fn path(&self, flag: Option<&Path>, key: &str) -> Option<PathBuf> {
        flag.map(Path::to_path_buf)
            .or_else(|| self.get(key).map(PathBuf::from))
    }

    pub fn parsed<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map_err(|e| anyhow::anyhow!("config key {key}={raw:?}: {e}")),
            None => Ok(default),
        }
    }

    /// Boolean: a set flag wins; otherwise the config key ("true"/"1").
    pub fn flag(&self, flag: bool, key: &str) -> bool {
        if flag {
            return true;
        }
        matches!(self.get(key), Some("true") | Some("1"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_precedence() {
        let config = Config::parse("# comment\nseed=9\nout=results\n").unwrap();
        assert_eq!(config.string(None, "out", "default"), "results");
        assert_eq!(config.string(Some("cli"), "out", "default"), "cli");
        assert_eq!(config.string(None, "missing", "default"), "default");
        let seed: u64 = config.parsed(None, "seed", 42).unwrap();
        assert_eq!(seed, 9);
        let seed: u64 = config.parsed(Some(7), "seed", 42).unwrap();
        assert_eq!(seed, 7);
    }

    #[test]
    fn malformed_lines_error() {
        assert!(Config::parse("just words").is_err());
        let config = Config::parse("n=x").unwrap();
        assert!(config.parsed::<u64>(None, "n", 1).is_err());
    }

    #[test]
    fn flags_or_config_booleans() {
        let config = Config::parse("balanced=true\n").unwrap();
        assert!(config.flag(false, "balanced"));
        assert!(!config.flag(false, "no_svg"));
        assert!(config.flag(true, "no_svg"));
    }
}
