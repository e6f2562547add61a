//! Flat JSON configuration files and flag/config/default resolution.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// Values from `--config`, keyed by long flag name with `_` or `-`.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: Map<String, Value>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        let Value::Object(obj) = v else {
            bail!("config must be a flat JSON object");
        };
        let mut values = Map::new();
        for (k, v) in obj {
            if v.is_object() || v.is_array() {
                bail!("config key '{k}' must hold a scalar");
            }
            values.insert(k.replace('-', "_"), v);
        }
        Ok(FileConfig { values })
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .with_context(|| format!("config key '{key}' has the wrong type")),
        }
    }
}

/// Resolves settings in precedence order and records the outcome for the report.
pub struct Resolver<'a> {
    file: &'a FileConfig,
    echo: Map<String, Value>,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a FileConfig) -> Self {
        Resolver { file, echo: Map::new() }
    }

    pub fn pick<T: DeserializeOwned + Serialize>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        let v = match flag {
            Some(v) => v,
            None => self.file.get(key)?.unwrap_or(default),
        };
        self.echo.insert(key.into(), serde_json::to_value(&v)?);
        Ok(v)
    }

    pub fn pick_opt<T: DeserializeOwned + Serialize>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.file.get(key)?,
        };
        self.echo.insert(key.into(), serde_json::to_value(&v)?);
        Ok(v)
    }

    pub fn echo(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.echo.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn finish(self) -> Map<String, Value> {
        self.echo
    }
}
