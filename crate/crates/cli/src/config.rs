//! Key=value config file support and flag/file/default resolution.
//!
//! Precedence: command-line flag, then config file entry, then built-in
//! default. The `CFTEXT_RESOURCE_ROOT` environment variable anchors
//! relative resource paths.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use cftext_core::explain::ExplainConfig;

/// Marker error for problems the user can fix on the command line;
/// mapped to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(message.into()))
}

/// Parsed `key=value` file. Blank lines and `#` comments are ignored.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<ConfigFile> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow!("cannot read config file {}: {e}", path.display()))?;
        let mut values = BTreeMap::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                anyhow!(
                    "{}:{}: expected key=value, found '{line}'",
                    path.display(),
                    line_no + 1
                )
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| usage(format!("config key '{key}': {e}"))),
        }
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }
}

/// Flag value, else config-file value, else default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn pick_opt<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Required setting: flag or config-file entry.
pub fn require<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T> {
    flag.or(file)
        .ok_or_else(|| usage(format!("missing required option --{name}")))
}

/// Resolves a resource path against `CFTEXT_RESOURCE_ROOT` when relative.
pub fn resolve_resource(path: PathBuf) -> PathBuf {
    if path.is_absolute() {
        return path;
    }
    match std::env::var_os("CFTEXT_RESOURCE_ROOT") {
        Some(root) if !root.is_empty() => PathBuf::from(root).join(path),
        _ => path,
    }
}

/// Builds the search configuration from flags and file entries over the
/// reference defaults, then validates it.
pub fn search_config(args: &crate::SearchArgs, file: &ConfigFile) -> Result<ExplainConfig> {
    let defaults = ExplainConfig::default();
    let config = ExplainConfig {
        copies_per_round: pick(
            args.copies,
            file.parse("copies")?,
            defaults.copies_per_round,
        ),
        wordnet_radius: pick(args.radius, file.parse("radius")?, defaults.wordnet_radius),
        theta: pick(args.theta, file.parse("theta")?, defaults.theta),
        tau: pick(args.tau, file.parse("tau")?, defaults.tau),
        theta_min: pick(args.theta_min, file.parse("theta-min")?, defaults.theta_min),
        seed: pick(args.seed, file.parse("seed")?, defaults.seed),
        max_runtime: pick_opt(args.max_runtime_ms, file.parse("max-runtime-ms")?)
            .map(std::time::Duration::from_millis),
    };
    config.validate().map_err(usage)?;
    Ok(config)
}

/// Loads a WordNet resource: a directory in database format or a JSON-lines
/// fixture file.
pub fn load_wordnet_resource(path: &Path) -> Result<cftext_core::wordnet::WordNetStore> {
    let resolved = resolve_resource(path.to_path_buf());
    if resolved.is_dir() {
        cftext_core::wordnet::load_wordnet(&resolved)
            .with_context(|| format!("loading WordNet database from {}", resolved.display()))
    } else {
        cftext_core::wordnet::load_fixture(&resolved)
            .with_context(|| format!("loading WordNet fixture from {}", resolved.display()))
    }
}

pub fn load_vectors_resource(path: &Path) -> Result<cftext_core::embed::VectorStore> {
    let resolved = resolve_resource(path.to_path_buf());
    let store = cftext_core::embed::VectorStore::load(&resolved)
        .with_context(|| format!("loading vectors from {}", resolved.display()))?;
    for warning in store.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(store)
}
