pub mod benchmark;
pub mod exact;
pub mod optimize;
pub mod sweep;

use crate::config::{get_parsed, load_config_file, ConfigError};
use std::collections::BTreeMap;

/// Merge an optional config file (checked against `known_keys`) under the
/// command's flag values.
pub fn file_values(
    config: &Option<String>,
    known_keys: &[&str],
) -> Result<BTreeMap<String, String>, ConfigError> {
    match config {
        Some(path) => load_config_file(path, known_keys),
        None => Ok(BTreeMap::new()),
    }
}

/// Flag value, else config-file value, else default.
pub fn resolve<T: std::str::FromStr + Clone>(
    flag: &Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, ConfigError> {
    if let Some(v) = flag {
        return Ok(v.clone());
    }
    Ok(get_parsed::<T>(file, key)?.unwrap_or(default))
}

pub fn resolve_opt<T: std::str::FromStr + Clone>(
    flag: &Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, ConfigError> {
    if let Some(v) = flag {
        return Ok(Some(v.clone()));
    }
    get_parsed::<T>(file, key)
}
