//! `--config` files: flat `key = value` lines, `#` comments. Flags given on
//! the command line win over the file; keys nobody asks for are an error.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct Params {
    file: BTreeMap<String, String>,
    asked: BTreeSet<String>,
}

impl Params {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut file = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
            let k = k.trim().trim_start_matches("--").to_string();
            if k.is_empty() {
                bail!("line {}: empty key", i + 1);
            }
            if file.insert(k.clone(), v.trim().to_string()).is_some() {
                bail!("line {}: key {k:?} given twice", i + 1);
            }
        }
        Ok(Params { file, asked: BTreeSet::new() })
    }

    pub fn opt<T: FromStr>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.asked.insert(key.to_string());
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|e| anyhow!("config key {key}: {v:?}: {e}")),
        }
    }

    pub fn req<T: FromStr>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(key, flag)?.ok_or_else(|| anyhow!("missing required parameter --{key}"))
    }

    pub fn switch(&mut self, key: &str, flag: bool) -> Result<bool> {
        Ok(flag || self.opt::<bool>(key, None)?.unwrap_or(false))
    }

    /// Fails on file keys that no parameter lookup asked for.
    pub fn finish(&self) -> Result<()> {
        let unknown: Vec<&str> = self.file.keys().filter(|k| !self.asked.contains(*k)).map(String::as_str).collect();
        if !unknown.is_empty() {
            let allowed: Vec<&str> = self.asked.iter().map(String::as_str).collect();
            bail!("unknown config key(s) {}; this command accepts {}", unknown.join(", "), allowed.join(", "));
        }
        Ok(())
    }
}
