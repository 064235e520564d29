use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::dataset::DataPaths;
use crate::error::{Error, Result};
use crate::model::{CacoseConfig, Task};

/// A training or evaluation run: task, data locations, output directory and
/// model hyperparameters, stored as TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub data: DataPaths,
    #[serde(default)]
    pub model: CacoseConfig,
}

impl RunConfig {
    pub fn new(task: Task, data: DataPaths) -> Self {
        RunConfig {
            task,
            out: None,
            data,
            model: CacoseConfig::for_task(task),
        }
    }

    /// Parses TOML. Keys missing from `[model]` take the task's preset.
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        // Strict first pass: unknown keys and type errors carry a line.
        let strict: RunConfig = toml::from_str(text).map_err(|e| toml_error(e, text, path))?;
        let mut root: toml::Table = toml::from_str(text).map_err(|e| toml_error(e, text, path))?;
        let mut model = toml::Table::try_from(CacoseConfig::for_task(strict.task))
            .expect("config is always representable as TOML");
        if let Some(toml::Value::Table(given)) = root.remove("model") {
            model.extend(given);
        }
        root.insert("model".into(), toml::Value::Table(model));
        let cfg: RunConfig = root
            .try_into()
            .map_err(|e: toml::de::Error| Error::InvalidConfig(e.message().to_string()))?;
        cfg.model.validate()?;
        Ok(cfg)
    }

    /// Fails only for seeds beyond the TOML integer range.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(format!("cannot write config as TOML: {e}")))
    }

    /// Reads `path`; relative data and output paths are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text, path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.data = cfg.data.resolved(base);
        cfg.out = cfg.out.map(|o| base.join(o));
        Ok(cfg)
    }
}

fn toml_error(e: toml::de::Error, text: &str, path: &Path) -> Error {
    let line = e
        .span()
        .map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1);
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: e.message().to_string(),
    }
}
