//! Disk cache for interpolated forms: the polynomial in the text format
//! next to a JSON sidecar with the provenance (field, seed, sample counts,
//! nullspace diagnostics).

use crate::multipoly::MultiPoly;
use serde_json::Value;
use std::io;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "COBLE_CACHE";

#[derive(Debug, Clone)]
pub struct CacheDir {
    root: PathBuf,
}

impl CacheDir {
    pub fn new(root: impl AsRef<Path>) -> io::Result<Self> {
        let root = root.as_ref().to_path_buf();
        std::fs::create_dir_all(&root)?;
        Ok(CacheDir { root })
    }

    /// Explicit path, else the COBLE_CACHE environment variable.
    pub fn resolve(explicit: Option<&Path>) -> io::Result<Option<Self>> {
        if let Some(p) = explicit {
            return Ok(Some(Self::new(p)?));
        }
        match std::env::var_os(CACHE_ENV) {
            Some(v) if !v.is_empty() => Ok(Some(Self::new(v)?)),
            _ => Ok(None),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn poly_path(&self, key: &str) -> PathBuf {
        self.root.join(format!("{key}.poly"))
    }

    fn sidecar_path(&self, key: &str) -> PathBuf {
        self.root.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<(MultiPoly, Value)> {
        let text = std::fs::read_to_string(self.poly_path(key)).ok()?;
        let poly = MultiPoly::from_text(&text).ok()?;
        let meta: Value =
            serde_json::from_str(&std::fs::read_to_string(self.sidecar_path(key)).ok()?).ok()?;
        Some((poly, meta))
    }

    pub fn store(&self, key: &str, poly: &MultiPoly, meta: &Value) -> io::Result<()> {
        std::fs::write(self.poly_path(key), poly.to_text())?;
        std::fs::write(self.sidecar_path(key), serde_json::to_string_pretty(meta)?)?;
        Ok(())
    }
}

/// Cache key for an interpolated dual keyed by (tag, α, p, seed).
pub fn dual_cache_key(tag: &str, alpha: &[u64; 5], p: u64, seed: u64) -> String {
    format!(
        "{tag}-p{p}-a{}-s{seed}",
        alpha.map(|a| a.to_string()).join("_")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldSpec;

    #[test]
    fn round_trip_through_disk() {
        let dir = std::env::temp_dir().join(format!("coble-cache-test-{}", std::process::id()));
        let cache = CacheDir::new(&dir).unwrap();
        let f = FieldSpec::prime(31).unwrap();
        let p = MultiPoly::term(3, f.clone(), vec![1, 1, 1], f.from_i64(5)).unwrap();
        let key = dual_cache_key("test", &[1, 2, 3, 4, 5], 31, 9);
        assert!(cache.load(&key).is_none());
        cache
            .store(&key, &p, &serde_json::json!({"seed": 9}))
            .unwrap();
        let (q, meta) = cache.load(&key).unwrap();
        assert_eq!(p, q);
        assert_eq!(meta["seed"], 9);
        std::fs::remove_dir_all(&dir).ok();
    }
}
