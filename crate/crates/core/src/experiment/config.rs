//! Flat key-value run configuration (TOML syntax). Keys mirror the CLI
//! flags; values given on the command line take precedence.
//!
//! ```toml
//! seed = 7
//! trials = 2000
//! mode = "em2g"
//! grid = "0.001,0.01,0.1"
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub q: Option<usize>,
    pub r: Option<usize>,
    pub l: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub svg: Option<bool>,
    pub gate_level: Option<bool>,
    pub n: Option<u64>,
    pub y: Option<u64>,
    pub mode: Option<String>,
    pub delta0: Option<f64>,
    pub smax: Option<f64>,
    pub sigma0: Option<f64>,
    pub grid: Option<String>,
    pub target: Option<f64>,
    pub boost: Option<bool>,
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

/// Command-line value, else config value, else `default`.
pub fn layered<T>(cli: Option<T>, file: Option<T>, default: T) -> T {
    cli.or(file).unwrap_or(default)
}
