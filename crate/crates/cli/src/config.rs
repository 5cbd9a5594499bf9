//! Flat `key = value` settings.
//!
//! A config file holds one setting per line; `#` starts a comment and blank
//! lines are ignored. Command-line flags are applied on top of the file.
//! Secrets never live here: the API key is read from the environment
//! variable named by `api_key_env`.

use crate::error::{usage, CliResult};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const KEYS: &[&str] = &[
    "corpus",
    "topics",
    "qrels",
    "candidates",
    "runs_dir",
    "generated",
    "judgment_level",
    "scorer",
    "source",
    "clf_scoring",
    "bm25_k1",
    "bm25_b",
    "qlm_lambda",
    "endpoint_url",
    "model_name",
    "model_tag",
    "mode",
    "template",
    "temperature",
    "num_generations",
    "max_retries",
    "timeout",
    "api_schema",
    "max_tokens",
    "top_p",
    "api_key_env",
    "retry_base_ms",
    "normalize",
    "percents",
    "wss_targets",
    "threads",
];

#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut settings = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(usage(format!("config line {}: expected `key = value`, found `{raw}`", i + 1)));
            };
            settings.set(key.trim(), value.trim()).map_err(|e| e.context(format!("config line {}", i + 1)))?;
        }
        Ok(settings)
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Settings::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                Self::parse(&text).map_err(|e| e.context(format!("config {}", path.display())))
            }
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> CliResult<()> {
        let key = key.replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(usage(format!("unknown setting `{key}`")));
        }
        self.values.insert(key, value.into());
        Ok(())
    }

    /// Applies `(key, value)` pairs from flags that were given.
    pub fn apply<I, V>(&mut self, overrides: I) -> CliResult<()>
    where
        I: IntoIterator<Item = (&'static str, Option<V>)>,
        V: ToString,
    {
        for (key, value) in overrides {
            if let Some(v) = value {
                self.set(key, v.to_string())?;
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> CliResult<&str> {
        self.get(key).ok_or_else(|| {
            usage(format!("missing setting `{key}` (pass --{} or set it in the config file)", key.replace('_', "-")))
        })
    }

    pub fn parsed<T>(&self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| usage(format!("setting `{key}` = `{v}`: {e}"))))
            .transpose()
    }

    pub fn parsed_or<T>(&self, key: &str, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    pub fn list<T>(&self, key: &str) -> CliResult<Option<Vec<T>>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim()
                            .parse::<T>()
                            .map_err(|e| usage(format!("setting `{key}` item `{item}`: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    /// A path setting that must point at an existing file or directory.
    pub fn existing_path(&self, key: &str) -> CliResult<PathBuf> {
        let path = PathBuf::from(self.require(key)?);
        if !path.exists() {
            return Err(usage(format!("{key} path {} does not exist", path.display())));
        }
        Ok(path)
    }

    pub fn optional_existing_path(&self, key: &str) -> CliResult<Option<PathBuf>> {
        match self.get(key) {
            None => Ok(None),
            Some(_) => self.existing_path(key).map(Some),
        }
    }
}
