//! On-disk store for exhaustive negative witness results.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::atlas::ATLAS_REVISION;

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    key: String,
    record: Value,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

/// Hash of the canonical config, the crate version and the atlas revision.
pub fn cache_key(config: &Value) -> String {
    let material = serde_json::json!({
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
        "atlas_revision": ATLAS_REVISION,
    });
    hex::encode(Sha256::digest(material.to_string().as_bytes()))
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache { dir: dir.to_path_buf() }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The stored record, or `None` on a miss. Unreadable or mismatched
    /// entries count as misses.
    pub fn lookup(&self, key: &str) -> Option<Value> {
        let path = self.path(key);
        let text = std::fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.key == key && e.record.is_object() => Some(e.record),
            _ => {
                log::warn!("ignoring corrupt cache entry {}", path.display());
                None
            }
        }
    }

    pub fn store(&self, key: &str, record: &Value) {
        let entry = Entry {
            key: key.to_string(),
            record: record.clone(),
        };
        let write = std::fs::create_dir_all(&self.dir).and_then(|_| {
            let tmp = self.dir.join(format!("{key}.tmp"));
            std::fs::write(&tmp, serde_json::to_vec(&entry).expect("entry serializes"))?;
            std::fs::rename(tmp, self.path(key))
        });
        if let Err(e) = write {
            log::warn!("cache store failed: {e}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = cache_key(&json!({"group": "PSL(3,3)", "seed": 1}));
        assert_ne!(key, cache_key(&json!({"group": "PSL(3,3)", "seed": 2})));
        assert!(cache.lookup(&key).is_none());
        cache.store(&key, &json!({"status": "NONE_EXHAUSTIVE"}));
        assert_eq!(cache.lookup(&key).unwrap()["status"], "NONE_EXHAUSTIVE");
        std::fs::write(dir.path().join(format!("{key}.json")), "{not json").unwrap();
        assert!(cache.lookup(&key).is_none());
    }
}
