//! `key = value` config file merged under command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};

use crate::OutputFormat;

pub const KEYS: [&str; 8] = ["bundle", "lang", "damping", "epsilon", "max_iter", "traversal", "format", "jobs"];

#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileConfig {
    pub bundle: Option<PathBuf>,
    pub lang: Option<String>,
    pub damping: Option<f64>,
    pub epsilon: Option<f64>,
    pub max_iter: Option<usize>,
    pub traversal: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<FileConfig> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        FileConfig::parse(&text, base).with_context(|| format!("config {}", path.display()))
    }

    /// Relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> anyhow::Result<FileConfig> {
        let mut c = FileConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |e: anyhow::Error| e.context(format!("line {}", n + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| at(anyhow!("expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num_err = || at(anyhow!("`{key}`: invalid number `{value}`"));
            match key {
                "bundle" => c.bundle = Some(base.join(value)),
                "traversal" => c.traversal = Some(base.join(value)),
                "lang" => c.lang = Some(value.to_string()),
                "damping" => c.damping = Some(value.parse().map_err(|_| num_err())?),
                "epsilon" => c.epsilon = Some(value.parse().map_err(|_| num_err())?),
                "max_iter" => c.max_iter = Some(value.parse().map_err(|_| num_err())?),
                "jobs" => c.jobs = Some(value.parse().map_err(|_| num_err())?),
                "format" => {
                    c.format = Some(match value {
                        "tsv" => OutputFormat::Tsv,
                        "markdown" => OutputFormat::Markdown,
                        _ => return Err(at(anyhow!("`format` must be tsv or markdown"))),
                    })
                }
                _ => return Err(at(anyhow!("unknown key `{key}` (known: {})", KEYS.join(", ")))),
            }
        }
        Ok(c)
    }
}

/// Rejects a zero thread count.
pub fn check_jobs(jobs: Option<usize>) -> anyhow::Result<Option<usize>> {
    match jobs {
        Some(0) => bail!("--jobs must be at least 1"),
        j => Ok(j),
    }
}
