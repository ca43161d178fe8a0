//! Settings file and command-line overrides.
//!
//! ```toml
//! [limits]
//! max_analog_length.B = 4.0      # meters, one key per ASIL: QM A B C D
//! require_shielding_beyond_m = 2.0
//! enforce_capacity = true
//! prefer_gateway = false
//! distance_metric = "manhattan"  # or "euclidean"
//!
//! [render]
//! include_devices = true
//! show_hosted = true
//! ```
//!
//! Precedence: `--set key=value` over the config file over defaults.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use toml::{Table, Value};

use crate::dsl::RenderOptions;
use crate::engine::FeasibilityConfig;
use crate::model::{Asil, DistanceMetric};

pub const CONFIG_ENV: &str = "EEA_CONFIG";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub limits: FeasibilityConfig,
    pub render: RenderOptions,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("malformed override `{0}`, expected key=value")]
    MalformedOverride(String),
    #[error("invalid config value: {0}")]
    Value(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawSettings {
    limits: RawLimits,
    render: RenderOptions,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawLimits {
    max_analog_length: BTreeMap<String, f64>,
    require_shielding_beyond_m: Option<f64>,
    enforce_capacity: Option<bool>,
    prefer_gateway: Option<bool>,
    distance_metric: Option<String>,
}

impl Settings {
    /// Loads `path` if given, then applies `overrides` in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Settings, ConfigError> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|source| ConfigError::Io { path: p.display().to_string(), source })?;
                text.parse::<Table>()?
            }
            None => Table::new(),
        };
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        Settings::from_table(table)
    }

    pub fn from_toml(text: &str) -> Result<Settings, ConfigError> {
        Settings::from_table(text.parse::<Table>()?)
    }

    fn from_table(table: Table) -> Result<Settings, ConfigError> {
        let raw: RawSettings = Value::Table(table).try_into()?;
        let mut limits = FeasibilityConfig::default();
        for (key, len) in raw.limits.max_analog_length {
            let asil: Asil = key.parse().map_err(|e| ConfigError::Value(format!("max_analog_length: {e}")))?;
            limits.max_analog_length_m.insert(asil, len);
        }
        if let Some(v) = raw.limits.require_shielding_beyond_m {
            limits.require_shielding_beyond_m = v;
        }
        if let Some(v) = raw.limits.enforce_capacity {
            limits.enforce_capacity = v;
        }
        if let Some(v) = raw.limits.prefer_gateway {
            limits.prefer_gateway = v;
        }
        if let Some(m) = raw.limits.distance_metric {
            limits.distance_metric = m.parse::<DistanceMetric>().map_err(|e| ConfigError::Value(e.to_string()))?;
        }
        limits.validate().map_err(|e| ConfigError::Value(e.0))?;
        Ok(Settings { limits, render: raw.render })
    }
}

/// Parses the value as a TOML literal, falling back to a bare string.
fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn apply_override(table: &mut Table, spec: &str) -> Result<(), ConfigError> {
    let malformed = || ConfigError::MalformedOverride(spec.to_string());
    let (key, value) = spec.split_once('=').ok_or_else(malformed)?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(malformed());
    }
    let (last, parents) = path.split_last().expect("split yields at least one part");
    let mut cur = table;
    for p in parents {
        let entry = cur.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = match entry {
            Value::Table(t) => t,
            _ => return Err(ConfigError::Value(format!("`{p}` in `{key}` is not a section"))),
        };
    }
    cur.insert(last.to_string(), parse_value(value.trim()));
    Ok(())
}
