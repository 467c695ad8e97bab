//! TOML configuration: extra examples, output format and truncation order.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;
use toricmono::mirrorlab::{ExampleSpec, DEFAULT_ORDER};

/// The only schema version understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Parse { path: String, message: String },
    #[error("unsupported schema_version {found} (expected {SCHEMA_VERSION})")]
    Version { found: u32 },
    #[error("example {0} is defined more than once")]
    Duplicate(String),
    #[error("example {name}: {reason}")]
    Invalid { name: String, reason: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSection {
    #[serde(default = "default_order")]
    pub order: usize,
}

impl Default for TruncationSection {
    fn default() -> Self {
        TruncationSection { order: DEFAULT_ORDER }
    }
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub truncation: TruncationSection,
    #[serde(default, rename = "example")]
    pub examples: Vec<ExampleSpec>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            schema_version: SCHEMA_VERSION,
            output: OutputSection::default(),
            truncation: TruncationSection::default(),
            examples: Vec::new(),
        }
    }
}

impl Config {
    pub fn parse(text: &str, path: &str) -> Result<Config, ConfigError> {
        let config: Config = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.into(),
            message: e.to_string(),
        })?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Version {
                found: config.schema_version,
            });
        }
        for e in &config.examples {
            e.validate().map_err(|err| ConfigError::Invalid {
                name: e.name.clone(),
                reason: err.to_string(),
            })?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: shown.clone(),
            source,
        })?;
        Config::parse(&text, &shown)
    }

    /// Built-in registry followed by the configured examples.
    pub fn examples(&self) -> Result<Vec<ExampleSpec>, ConfigError> {
        let mut all = toricmono::mirrorlab::registry();
        for e in &self.examples {
            if all.iter().any(|x| x.name == e.name) {
                return Err(ConfigError::Duplicate(e.name.clone()));
            }
            all.push(e.clone());
        }
        Ok(all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = Config::parse("schema_version = 1\n", "inline").unwrap();
        assert_eq!(c.output.format, OutputFormat::Text);
        assert_eq!(c.truncation.order, DEFAULT_ORDER);
        assert_eq!(c.examples().unwrap().len(), toricmono::mirrorlab::registry().len());
    }

    #[test]
    fn unknown_key_rejected() {
        let err = Config::parse("schema_version = 1\ncolour = \"red\"\n", "inline").unwrap_err();
        assert!(err.to_string().contains("colour"));
    }

    #[test]
    fn custom_example() {
        let text = r#"
schema_version = 1
[[example]]
name = "quadric-quartic"
kind = "one_param"
weights = [1, 1, 1, 1, 1, 1]
degrees = [2, 4]
partition = [0, 0, 1, 1, 1, 1]
"#;
        let c = Config::parse(text, "inline").unwrap();
        assert_eq!(c.examples().unwrap().last().unwrap().name, "quadric-quartic");
    }

    #[test]
    fn wrong_version_rejected() {
        assert!(matches!(
            Config::parse("schema_version = 7\n", "inline"),
            Err(ConfigError::Version { found: 7 })
        ));
    }
}
