//! Content-addressed result cache, one JSON file per entry.
//!
//! The key is the SHA-256 of the canonical JSON of
//! `{version, op, params}`; params carry canonical presentation text and
//! the oracle spec. serde_json objects keep keys sorted, so the encoding
//! is canonical. Entries whose stored version or key differ are misses.

use std::fs;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+cache1");

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    key: Value,
    version: String,
    value: Value,
}

#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir }
    }

    fn key(op: &str, params: &Value) -> (Value, String) {
        let key = json!({ "version": VERSION, "op": op, "params": params });
        let digest = Sha256::digest(key.to_string().as_bytes());
        (key, hex::encode(digest))
    }

    pub fn get<T: DeserializeOwned>(&self, op: &str, params: &Value) -> Option<T> {
        let dir = self.dir.as_ref()?;
        let (key, hash) = Cache::key(op, params);
        let text = fs::read_to_string(dir.join(format!("{hash}.json"))).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.version != VERSION || entry.key != key {
            return None;
        }
        serde_json::from_value(entry.value).ok()
    }

    /// Write failures are ignored.
    pub fn put<T: Serialize>(&self, op: &str, params: &Value, value: &T) {
        let Some(dir) = &self.dir else { return };
        let (key, hash) = Cache::key(op, params);
        let Ok(value) = serde_json::to_value(value) else {
            return;
        };
        let entry = Entry {
            key,
            version: VERSION.to_string(),
            value,
        };
        if fs::create_dir_all(dir).is_err() {
            return;
        }
        let path = dir.join(format!("{hash}.json"));
        let tmp = dir.join(format!("{hash}.json.{}.tmp", std::process::id()));
        let Ok(text) = serde_json::to_string_pretty(&entry) else {
            return;
        };
        if fs::write(&tmp, text).is_ok() && fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_invalidation() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let params = json!({"n": 4});
        assert_eq!(cache.get::<u32>("dehn", &params), None);
        cache.put("dehn", &params, &7u32);
        assert_eq!(cache.get::<u32>("dehn", &params), Some(7));
        assert_eq!(cache.get::<u32>("dehn", &json!({"n": 5})), None);

        let (_, hash) = Cache::key("dehn", &params);
        let path = dir.path().join(format!("{hash}.json"));
        let mut entry: Entry = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        entry.version = "0.0.0".into();
        fs::write(&path, serde_json::to_string(&entry).unwrap()).unwrap();
        assert_eq!(cache.get::<u32>("dehn", &params), None);
    }

    #[test]
    fn disabled_cache_is_inert() {
        let cache = Cache::new(None);
        cache.put("x", &json!({}), &1u8);
        assert_eq!(cache.get::<u8>("x", &json!({})), None);
    }
}
