//! Persistent factor cache.
//!
//! The file is a JSON object mapping a decimal integer to the increasing list
//! of its distinct prime factors, e.g. `{"26": ["2", "13"]}`. Lookups may run
//! concurrently; writes take the writer lock and rewrite the whole file.

use crate::error::Result;
use num_bigint::BigUint;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

#[derive(Debug, Default)]
pub struct FactorCache {
    path: Option<PathBuf>,
    entries: RwLock<BTreeMap<String, Vec<String>>>,
    writer: Mutex<()>,
}

impl FactorCache {
    /// An empty cache that is never written to disk.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens `path`, starting empty when the file does not exist yet.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let entries = if path.exists() {
            let text = fs::read_to_string(&path)?;
            if text.trim().is_empty() {
                BTreeMap::new()
            } else {
                serde_json::from_str(&text)?
            }
        } else {
            BTreeMap::new()
        };
        Ok(Self {
            path: Some(path),
            entries: RwLock::new(entries),
            writer: Mutex::new(()),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distinct primes recorded for `n`, if any. Entries that fail to parse
    /// are treated as absent.
    pub fn lookup(&self, n: &BigUint) -> Option<Vec<BigUint>> {
        let entries = self.entries.read().unwrap();
        let primes = entries.get(&n.to_str_radix(10))?;
        primes.iter().map(|p| p.parse().ok()).collect()
    }

    /// Records the distinct primes of `n` and persists the file.
    pub fn insert(&self, n: &BigUint, primes: &[BigUint]) -> Result<()> {
        let _guard = self.writer.lock().unwrap();
        let key = n.to_str_radix(10);
        let mut sorted: Vec<BigUint> = primes.to_vec();
        sorted.sort();
        sorted.dedup();
        let value: Vec<String> = sorted.iter().map(|p| p.to_str_radix(10)).collect();
        {
            let mut entries = self.entries.write().unwrap();
            if entries.get(&key) == Some(&value) {
                return Ok(());
            }
            entries.insert(key, value);
        }
        self.flush_locked()
    }

    fn flush_locked(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let text = {
            let entries = self.entries.read().unwrap();
            serde_json::to_string_pretty(&*entries)?
        };
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text + "\n")?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("factors.json");
        let cache = FactorCache::open(&path).unwrap();
        assert!(cache.is_empty());
        let n = BigUint::from(80u32);
        cache
            .insert(&n, &[BigUint::from(5u32), BigUint::from(2u32)])
            .unwrap();
        let reopened = FactorCache::open(&path).unwrap();
        assert_eq!(
            reopened.lookup(&n).unwrap(),
            vec![BigUint::from(2u32), BigUint::from(5u32)]
        );
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"80\""));
        assert!(text.contains("\"2\""));
    }
}
