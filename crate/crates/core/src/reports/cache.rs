//! On-disk cache of complete [`InvariantResult`]s.
//!
//! Entries live in `$ZSF_CACHE_DIR`, falling back to `$HOME/.cache/zsf`,
//! one JSON file per key named by the key's sha256. Writes go to a temporary
//! file that is then renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::invariants::{InvariantKind, InvariantResult, Method};

pub const CACHE_DIR_ENV: &str = "ZSF_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub kind: InvariantKind,
    pub group: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub method: Method,
    pub orbit_reduction: bool,
    pub library_version: String,
}

impl CacheKey {
    pub fn new(
        kind: InvariantKind,
        group: &[u32],
        k: Option<usize>,
        method: Method,
        orbit_reduction: bool,
    ) -> Self {
        CacheKey {
            kind,
            group: group.to_vec(),
            k,
            method,
            orbit_reduction,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("cache key serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub value: InvariantResult,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// A cache that never hits and never writes.
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: Some(dir.into()),
        }
    }

    /// The cache location from the environment, or a disabled cache when
    /// `enabled` is false or no location can be found.
    pub fn from_env(enabled: bool) -> Self {
        if !enabled {
            return Cache::disabled();
        }
        if let Some(d) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
            return Cache::at(d);
        }
        match std::env::var_os("HOME").filter(|d| !d.is_empty()) {
            Some(home) => Cache::at(Path::new(&home).join(".cache").join("zsf")),
            None => Cache::disabled(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        Some(self.dir.as_ref()?.join(format!("{}.json", key.digest())))
    }

    /// A stored result for `key`. Unreadable or mismatched entries count as
    /// misses.
    pub fn get(&self, key: &CacheKey) -> Option<InvariantResult> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == *key).then_some(entry.value)
    }

    /// Stores `value` unless it is partial. Does nothing when disabled.
    pub fn put(&self, key: &CacheKey, value: &InvariantResult) -> Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(key)) else {
            return Ok(());
        };
        if value.is_partial() {
            return Ok(());
        }
        fs::create_dir_all(dir)?;
        let entry = CacheEntry {
            key: key.clone(),
            value: value.clone(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let tmp = dir.join(format!(".{}.{}.tmp", key.digest(), std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&serde_json::to_vec_pretty(&entry)?)?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Returns the cached result for `key` or computes and stores it.
    pub fn get_or_compute(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<InvariantResult>,
    ) -> Result<InvariantResult> {
        if let Some(hit) = self.get(key) {
            return Ok(hit);
        }
        let value = compute()?;
        self.put(key, &value)?;
        Ok(value)
    }
}
