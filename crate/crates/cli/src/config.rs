//! Defaults that can be overridden by a `key = value` file named in
//! `DOL_CONFIG`; command-line flags override both.

use std::path::Path;

use serde::Deserialize;

pub const CONFIG_ENV: &str = "DOL_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    pub dim: usize,
    pub tol: f64,
    pub kappa: f64,
    pub nmax: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            dim: 64,
            tol: 1e-10,
            kappa: 1.0,
            nmax: 10,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    dim: Option<usize>,
    tol: Option<f64>,
    kappa: Option<f64>,
    nmax: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config file {path}: {source}")]
    Parse {
        path: String,
        source: toml::de::Error,
    },
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: shown.clone(),
            source,
        })?;
        Self::from_str_contents(&text).map_err(|source| ConfigError::Parse {
            path: shown,
            source,
        })
    }

    fn from_str_contents(text: &str) -> Result<Self, toml::de::Error> {
        let file: FileConfig = toml::from_str(text)?;
        let base = Self::default();
        Ok(Self {
            dim: file.dim.unwrap_or(base.dim),
            tol: file.tol.unwrap_or(base.tol),
            kappa: file.kappa.unwrap_or(base.kappa),
            nmax: file.nmax.unwrap_or(base.nmax),
        })
    }

    /// Built-in defaults, replaced by the file in `DOL_CONFIG` when set.
    pub fn from_env() -> Result<Self, ConfigError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Self::from_file(Path::new(&path)),
            _ => Ok(Self::default()),
        }
    }
}
