//! `key = value` configuration files and their merge with command-line
//! flags. Flags always win; every resolved value is recorded so reports can
//! echo the effective configuration.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

pub const KNOWN_KEYS: &[&str] = &[
    "collection",
    "format",
    "topics",
    "qrels",
    "pool",
    "stopwords",
    "lexicon",
    "index",
    "out",
    "tag",
    "strategy",
    "k1",
    "b",
    "beta",
    "expansion_weight",
    "ndcg_cutoff",
    "k",
    "threads",
    "baseline",
];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with('[') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", n + 1))?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key `{key}`", n + 1);
            }
            let value = value.trim().trim_matches('"').to_string();
            if values.insert(key.clone(), value).is_some() {
                bail!("line {}: duplicate key `{key}`", n + 1);
            }
        }
        Ok(Self { values })
    }
}

/// Resolves settings for one subcommand from flags, then the config file,
/// then defaults.
#[derive(Debug)]
pub struct Resolver {
    file: ConfigFile,
    effective: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(file: ConfigFile) -> Self {
        Self {
            file,
            effective: BTreeMap::new(),
        }
    }

    pub fn effective(&self) -> &BTreeMap<String, String> {
        &self.effective
    }

    pub fn record(&mut self, key: &str, value: impl Display) {
        self.effective.insert(key.to_string(), value.to_string());
    }

    pub fn opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.values.get(key) {
                Some(s) => Some(s.parse::<T>().map_err(|e| anyhow!("config key `{key}`: {e}"))?),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.record(key, v);
        }
        Ok(value)
    }

    pub fn or<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.opt(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, &default);
                Ok(default)
            }
        }
    }

    pub fn required<T>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.opt(key, flag)?
            .ok_or_else(|| anyhow!("missing --{} (or `{key}` in the config file)", key.replace('_', "-")))
    }

    fn path(&mut self, key: &str, flag: Option<PathBuf>) -> Result<Option<PathBuf>> {
        let value = flag.or_else(|| self.file.values.get(key).map(PathBuf::from));
        if let Some(p) = &value {
            self.record(key, p.display());
        }
        Ok(value)
    }

    /// An input path that must exist.
    pub fn input(&mut self, key: &str, flag: Option<PathBuf>) -> Result<Option<PathBuf>> {
        let value = self.path(key, flag)?;
        if let Some(p) = &value {
            if !p.exists() {
                bail!("{key} path {} does not exist", p.display());
            }
        }
        Ok(value)
    }

    pub fn required_input(&mut self, key: &str, flag: Option<PathBuf>) -> Result<PathBuf> {
        self.input(key, flag)?
            .ok_or_else(|| anyhow!("missing --{} (or `{key}` in the config file)", key.replace('_', "-")))
    }

    /// An output path whose parent directory must exist.
    pub fn required_output(&mut self, key: &str, flag: Option<PathBuf>) -> Result<PathBuf> {
        let p = self
            .path(key, flag)?
            .ok_or_else(|| anyhow!("missing --{key} (or `{key}` in the config file)"))?;
        let parent = p
            .parent()
            .filter(|d| !d.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        if !parent.is_dir() {
            bail!("output directory {} does not exist", parent.display());
        }
        if p.is_dir() {
            bail!("output path {} is a directory", p.display());
        }
        Ok(p)
    }
}
