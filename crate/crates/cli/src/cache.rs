//! Content-addressed evaluation cache.
//!
//! One JSON file per key under the cache directory. Writes go to a temporary
//! file in the same directory and are renamed into place, so readers see
//! either nothing or a complete entry; concurrent writers store identical bytes.

use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};
use std::io::Write;

use crate::report::{Body, CacheStats};

pub const ENV_VAR: &str = "VISHIFT_CACHE_DIR";

pub fn default_dir() -> PathBuf {
    std::env::temp_dir().join("vishift-cache")
}

/// Env var first, then the flag, then the default.
pub fn resolve_dir(flag: Option<PathBuf>) -> PathBuf {
    std::env::var_os(ENV_VAR)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or(flag)
        .unwrap_or_else(default_dir)
}

#[derive(Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
    pub stats: CacheStats,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache {
            dir: Some(dir),
            stats: CacheStats {
                hits: 0,
                misses: 0,
                writes: 0,
            },
        }
    }

    pub fn disabled() -> Self {
        Cache {
            dir: None,
            stats: CacheStats {
                hits: 0,
                misses: 0,
                writes: 0,
            },
        }
    }

    /// Hex SHA-256 of the key parts, NUL separated.
    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        for p in parts {
            h.update(p.as_bytes());
            h.update([0u8]);
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get(&mut self, key: &str) -> Option<Body> {
        let path = self.path(key)?;
        let found = fs::read(&path)
            .ok()
            .and_then(|b| serde_json::from_slice(&b).ok());
        match found {
            Some(_) => self.stats.hits += 1,
            None => self.stats.misses += 1,
        }
        found
    }

    /// Best effort: an unwritable cache directory only costs recomputation.
    pub fn put(&mut self, key: &str, body: &Body) {
        let (Some(dir), Some(path)) = (self.dir.clone(), self.path(key)) else {
            return;
        };
        let write = || -> std::io::Result<()> {
            fs::create_dir_all(&dir)?;
            let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
            tmp.write_all(&serde_json::to_vec(body).expect("bodies serialize"))?;
            tmp.as_file().sync_all()?;
            tmp.persist(&path).map_err(|e| e.error)?;
            Ok(())
        };
        if write().is_ok() {
            self.stats.writes += 1;
        }
    }

    /// Cached `compute()`, keyed by `key`.
    pub fn get_or_compute<E>(
        &mut self,
        key: &str,
        compute: impl FnOnce() -> Result<Body, E>,
    ) -> Result<Body, E> {
        if let Some(b) = self.get(key) {
            return Ok(b);
        }
        let body = compute()?;
        self.put(key, &body);
        Ok(body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Table;

    #[test]
    fn round_trip_and_stats() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = Cache::new(dir.path().to_path_buf());
        let key = Cache::key(&["abc", "dims", "4"]);
        assert_ne!(key, Cache::key(&["abc", "dims4"]));
        let mut body = Body::default();
        body.tables.push(Table::by_degree("dims", "dim", &[1, 2]));
        let first = c.get_or_compute::<()>(&key, || Ok(body.clone())).unwrap();
        let second = c
            .get_or_compute::<()>(&key, || panic!("should hit"))
            .unwrap();
        assert_eq!(first, second);
        assert_eq!((c.stats.hits, c.stats.misses, c.stats.writes), (1, 1, 1));
        // idempotent rewrite
        c.put(&key, &body);
        assert_eq!(c.get(&key), Some(body));
    }

    #[test]
    fn disabled_never_hits() {
        let mut c = Cache::disabled();
        let key = Cache::key(&["x"]);
        c.put(&key, &Body::default());
        assert_eq!(c.get(&key), None);
        assert_eq!(c.stats.writes, 0);
    }
}
