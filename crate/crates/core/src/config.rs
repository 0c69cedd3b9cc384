//! Run configuration: one JSON document with a section per component, plus
//! dotted `key=value` overrides applied before validation.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::SystemParams;
use crate::error::{Error, Result};
use crate::noma::QosTargets;
use crate::oracle::OracleConfig;
use crate::placement::AlgoConfig;
use crate::sim::{Scenario, SweepSpec};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub system: SystemParams,
    #[serde(default)]
    pub qos: QosTargets,
    #[serde(default)]
    pub algo: AlgoConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub scenario: Option<Scenario>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.qos.validate()?;
        self.algo.validate()?;
        self.oracle.validate()?;
        self.sweep.validate()?;
        if let Some(s) = &self.scenario {
            s.validate(self.system.side_d)?;
        }
        Ok(())
    }

    pub fn from_value(value: Value) -> Result<Self> {
        serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            Error::Config(format!("at `{path}`: {}", e.into_inner()))
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_value(value)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Applies `section.key=value` overrides. Values parse as JSON when they
    /// can (`30`, `[1,2]`, `null`) and fall back to plain strings.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        let mut value = serde_json::to_value(self).map_err(|e| Error::Config(e.to_string()))?;
        let known = value.clone();
        for item in overrides {
            let item = item.as_ref();
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{item}` is not key=value")))?;
            let parsed =
                serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_owned()));
            set_dotted(&mut value, &known, key, parsed)?;
        }
        Self::from_value(value)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_pretty() + "\n").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Walks `key` through `root`, creating sections that are still null. A key
/// is rejected only when its parent section exists in `known` and lacks it.
fn set_dotted(root: &mut Value, known: &Value, key: &str, new: Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("malformed key `{key}`")));
    }
    let mut node = root;
    let mut reference = Some(known);
    for (depth, part) in parts.iter().enumerate() {
        if node.is_null() {
            *node = Value::Object(Default::default());
        }
        let obj = node.as_object_mut().ok_or_else(|| {
            Error::Config(format!("`{}` is not a section", parts[..depth].join(".")))
        })?;
        if let Some(Value::Object(known_obj)) = reference {
            if !known_obj.contains_key(*part) {
                return Err(Error::Config(format!("unknown key `{key}`")));
            }
        }
        reference = reference.and_then(|r| r.get(*part));
        if depth + 1 == parts.len() {
            obj.insert((*part).to_owned(), new);
            return Ok(());
        }
        node = obj.entry((*part).to_owned()).or_insert(Value::Null);
    }
    unreachable!("key has at least one segment")
}
