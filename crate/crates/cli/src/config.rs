//! Plain-text nested key/value run configuration with strict key checking.
//!
//! Files hold `key = value` lines (# starts a comment). Flags override file
//! values; every run echoes its fully resolved configuration as leading
//! comment lines so outputs are self-describing.

use std::collections::BTreeMap;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Parsed key/value file, keys checked against the command's whitelist.
pub fn parse_config(text: &str, known_keys: &[&str]) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError(format!(
                "line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !known_keys.contains(&key.as_str()) {
            return Err(ConfigError(format!(
                "line {}: unknown key {key:?} (known: {})",
                lineno + 1,
                known_keys.join(", ")
            )));
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(ConfigError(format!("line {}: duplicate key {key:?}", lineno + 1)));
        }
    }
    Ok(map)
}

pub fn load_config_file(
    path: &str,
    known_keys: &[&str],
) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {path}: {e}")))?;
    parse_config(&text, known_keys)
}

pub fn get_parsed<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| ConfigError(format!("bad value for {key}: {v:?}"))),
    }
}

/// Resolved configuration echoed at the top of every output.
pub struct Echo {
    pub command: &'static str,
    entries: Vec<(String, String)>,
}

impl Echo {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn header(&self) -> String {
        let mut out = format!("# fidelity-forge {}\n", self.command);
        for (k, v) in &self.entries {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let known = ["alpha", "beta.gamma"];
        let map = parse_config("alpha = 1\n# comment\nbeta.gamma = x # trailing\n", &known).unwrap();
        assert_eq!(map.get("alpha").unwrap(), "1");
        assert_eq!(map.get("beta.gamma").unwrap(), "x");
        assert!(parse_config("delta = 2", &known).is_err());
        assert!(parse_config("alpha 2", &known).is_err());
        assert!(parse_config("alpha = 1\nalpha = 2", &known).is_err());
    }
}
