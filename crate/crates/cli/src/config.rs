//! Flat `key = value` config files mirroring the command-line flags.
//! Explicit flags always win over file values.

use crate::CliError;
use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

pub fn load(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::invalid(format!(
                "config {}:{}: expected `key = value`, got `{raw}`",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Fill an unset flag from the config map.
pub fn fill<T: FromStr>(
    slot: &mut Option<T>,
    map: &HashMap<String, String>,
    key: &str,
) -> Result<(), CliError> {
    if slot.is_none() {
        if let Some(raw) = map.get(key) {
            let value = raw
                .parse()
                .map_err(|_| CliError::invalid(format!("config key `{key}`: bad value `{raw}`")))?;
            *slot = Some(value);
        }
    }
    Ok(())
}
