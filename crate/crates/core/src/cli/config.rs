//! Run configuration as a flat map of dotted keys.
//!
//! A config file is a JSON object such as
//! `{"train.temperature": 0.1, "episode.shot": 1}`. Every key must name a
//! known setting; missing keys keep their defaults. Command-line flags are
//! applied on top, and the merged result is what commands echo into their
//! outputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fewshot::{ClassifierSpec, EpisodeConfig};
use crate::model::TrainConfig;
use crate::pipeline::BoxCoxConfig;

pub type FlatConfig = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BankSection {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpisodeSection {
    pub way: usize,
    pub shot: usize,
    pub query: usize,
    /// Episodes per evaluation.
    pub episodes: usize,
}

impl Default for EpisodeSection {
    fn default() -> Self {
        let e = EpisodeConfig::default();
        Self {
            way: e.way,
            shot: e.shot,
            query: e.query,
            episodes: 2000,
        }
    }
}

impl EpisodeSection {
    pub fn config(&self) -> EpisodeConfig {
        EpisodeConfig {
            way: self.way,
            shot: self.shot,
            query: self.query,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub bank: BankSection,
    pub boxcox: BoxCoxConfig,
    pub train: TrainConfig,
    pub episode: EpisodeSection,
    pub classifier: ClassifierSpec,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        self.classifier.validate()?;
        self.episode.config().validate()?;
        if self.episode.episodes == 0 {
            return Err(Error::InvalidArgument(
                "episode.episodes must be positive".into(),
            ));
        }
        let b = &self.boxcox;
        if !b.lambda.is_finite() || b.grid.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidArgument(
                "boxcox lambda values must be finite".into(),
            ));
        }
        if b.fit && b.grid.is_empty() {
            return Err(Error::InvalidArgument(
                "boxcox.fit needs a non-empty boxcox.grid".into(),
            ));
        }
        Ok(())
    }

    pub fn to_flat(&self) -> FlatConfig {
        let mut out = FlatConfig::new();
        flatten(
            "",
            &serde_json::to_value(self).expect("config serializes"),
            &mut out,
        );
        out
    }

    /// Rebuilds and validates a config from flat keys.
    pub fn from_flat(flat: &FlatConfig) -> Result<Self> {
        let mut root = Map::new();
        for (key, value) in flat {
            insert_dotted(&mut root, key, value.clone())?;
        }
        let config: RunConfig = serde_json::from_value(Value::Object(root))
            .map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut FlatConfig) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        leaf => {
            out.insert(prefix.to_string(), leaf.clone());
        }
    }
}

fn insert_dotted(root: &mut Map<String, Value>, key: &str, value: Value) -> Result<()> {
    let mut parts = key.split('.').peekable();
    let mut node = root;
    while let Some(part) = parts.next() {
        if parts.peek().is_none() {
            node.insert(part.to_string(), value);
            return Ok(());
        }
        node = node
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()))
            .as_object_mut()
            .ok_or_else(|| Error::InvalidArgument(format!("config key {key:?} conflicts")))?;
    }
    Ok(())
}

/// Layered configuration: defaults, then an optional file, then overrides.
#[derive(Debug, Clone)]
pub struct ConfigBuilder {
    flat: FlatConfig,
}

impl Default for ConfigBuilder {
    fn default() -> Self {
        Self {
            flat: RunConfig::default().to_flat(),
        }
    }
}

impl ConfigBuilder {
    pub fn with_file(mut self, path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(self) };
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let values: BTreeMap<String, Value> = serde_json::from_str(&text).map_err(|e| {
            Error::InvalidArgument(format!(
                "{}: config must be a flat JSON object of dotted keys: {e}",
                path.display()
            ))
        })?;
        for (k, v) in values {
            self = self.set(&k, v)?;
        }
        Ok(self)
    }

    pub fn set(mut self, key: &str, value: Value) -> Result<Self> {
        match self.flat.get_mut(key) {
            Some(slot) => {
                *slot = value;
                Ok(self)
            }
            None => Err(Error::InvalidArgument(format!(
                "unknown config key {key:?}"
            ))),
        }
    }

    /// Sets `key` when `value` is present.
    pub fn set_opt<T: Serialize>(self, key: &str, value: Option<T>) -> Result<Self> {
        match value {
            Some(v) => {
                let v = serde_json::to_value(v)?;
                self.set(key, v)
            }
            None => Ok(self),
        }
    }

    /// Applies a `key=value` override; the value is read as JSON when it
    /// parses, otherwise as a string.
    pub fn set_assignment(self, assignment: &str) -> Result<Self> {
        let (key, raw) = assignment.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("expected key=value, got {assignment:?}"))
        })?;
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        self.set(key.trim(), value)
    }

    pub fn build(self) -> Result<(RunConfig, FlatConfig)> {
        let config = RunConfig::from_flat(&self.flat)?;
        // re-flatten so the echo shows normalized values
        let flat = config.to_flat();
        Ok((config, flat))
    }
}
