//! Flat `key = value` configuration files supplying defaults for flags the
//! user did not pass on the command line. Precedence: CLI flag, then config
//! file, then built-in default.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Default)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { map })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.parse_key(key)
    }

    pub fn i64(&self, key: &str) -> Result<Option<i64>, CliError> {
        self.parse_key(key)
    }

    pub fn u32(&self, key: &str) -> Result<Option<u32>, CliError> {
        self.parse_key(key)
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.map.get(key).cloned()
    }

    fn parse_key<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                CliError::Config(format!("config key {key}: cannot parse value {v:?}"))
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs_with_comments() {
        let s = Settings::parse("# defaults\nhorizon = 64\nc=1.5  # inline\n\nfamily = krein\n")
            .unwrap();
        assert_eq!(s.i64("horizon").unwrap(), Some(64));
        assert_eq!(s.f64("c").unwrap(), Some(1.5));
        assert_eq!(s.string("family").as_deref(), Some("krein"));
        assert_eq!(s.raw("missing"), None);
    }

    #[test]
    fn rejects_malformed_lines_and_values() {
        assert!(Settings::parse("just-a-token\n").is_err());
        let s = Settings::parse("horizon = soon\n").unwrap();
        assert!(s.i64("horizon").is_err());
    }
}
