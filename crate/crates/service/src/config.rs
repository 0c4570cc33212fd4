//! Service configuration: a TOML file, then `FOLGRADE_*` environment overrides.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid value for {key}: {value:?}")]
    Env { key: &'static str, value: String },
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct Config {
    pub listen: SocketAddr,
    pub token_file: PathBuf,
    pub store_path: PathBuf,
    /// Used for exercises created without an explicit time limit.
    pub default_time_limit_ms: u64,
    /// Maximum number of grades running at once.
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            token_file: PathBuf::from("tokens.toml"),
            store_path: PathBuf::from("folgrade.jsonl"),
            default_time_limit_ms: 5000,
            workers: 4,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path` if given (relative paths inside it are resolved against
    /// its directory), then applies the process environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                    path: p.to_path_buf(),
                    source,
                })?;
                let mut c = Config::from_toml(&text)?;
                if let Some(dir) = p.parent() {
                    c.token_file = dir.join(&c.token_file);
                    c.store_path = dir.join(&c.store_path);
                }
                c
            }
            None => Config::default(),
        };
        config.apply_env(|k| std::env::var(k).ok())?;
        config.check()?;
        Ok(config)
    }

    /// Overrides from `FOLGRADE_LISTEN`, `FOLGRADE_TOKEN_FILE`,
    /// `FOLGRADE_STORE`, `FOLGRADE_TIME_LIMIT_MS` and `FOLGRADE_WORKERS`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        fn parsed<T: std::str::FromStr>(key: &'static str, value: String) -> Result<T, ConfigError> {
            value.parse().map_err(|_| ConfigError::Env { key, value })
        }
        if let Some(v) = lookup("FOLGRADE_LISTEN") {
            self.listen = parsed("FOLGRADE_LISTEN", v)?;
        }
        if let Some(v) = lookup("FOLGRADE_TOKEN_FILE") {
            self.token_file = PathBuf::from(v);
        }
        if let Some(v) = lookup("FOLGRADE_STORE") {
            self.store_path = PathBuf::from(v);
        }
        if let Some(v) = lookup("FOLGRADE_TIME_LIMIT_MS") {
            self.default_time_limit_ms = parsed("FOLGRADE_TIME_LIMIT_MS", v)?;
        }
        if let Some(v) = lookup("FOLGRADE_WORKERS") {
            self.workers = parsed("FOLGRADE_WORKERS", v)?;
        }
        Ok(())
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if self.default_time_limit_ms == 0 {
            return Err(ConfigError::NotPositive("default-time-limit-ms"));
        }
        if self.workers == 0 {
            return Err(ConfigError::NotPositive("workers"));
        }
        Ok(())
    }

    pub fn default_time_limit(&self) -> Duration {
        Duration::from_millis(self.default_time_limit_ms)
    }
}
