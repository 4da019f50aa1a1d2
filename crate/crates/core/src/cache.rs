//! Append-only JSON-lines store of finished runs, keyed by presentation hash,
//! operation and parameters.

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Records written by a different engine version are ignored on lookup.
pub const ENGINE_VERSION: &str = concat!("qhs-core/", env!("CARGO_PKG_VERSION"));

/// Default cache directory when none is given on the command line.
pub const CACHE_DIR_ENV: &str = "QHS_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub hash: String,
    pub operation: String,
    pub params: Value,
    pub result: Value,
    pub wall_ms: u64,
    pub engine_version: String,
}

#[derive(Debug, Clone)]
pub struct ResultCache {
    file: PathBuf,
}

impl ResultCache {
    pub fn open(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(ResultCache {
            file: dir.as_ref().join("runs.jsonl"),
        })
    }

    pub fn path(&self) -> &Path {
        &self.file
    }

    /// The most recent matching record, if any. Unparseable lines are skipped.
    pub fn lookup(&self, hash: &str, operation: &str, params: &Value) -> Option<RunRecord> {
        let f = fs::File::open(&self.file).ok()?;
        BufReader::new(f)
            .lines()
            .map_while(|l| l.ok())
            .filter_map(|l| serde_json::from_str::<RunRecord>(&l).ok())
            .filter(|r| {
                r.engine_version == ENGINE_VERSION
                    && r.hash == hash
                    && r.operation == operation
                    && r.params == *params
            })
            .last()
    }

    pub fn store(&self, record: &RunRecord) -> std::io::Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.file)?;
        let line = serde_json::to_string(record).map_err(std::io::Error::other)?;
        writeln!(f, "{line}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn record(result: Value) -> RunRecord {
        RunRecord {
            hash: "abc".into(),
            operation: "hilbert".into(),
            params: json!({"max_degree": 10}),
            result,
            wall_ms: 3,
            engine_version: ENGINE_VERSION.into(),
        }
    }

    #[test]
    fn store_and_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path()).unwrap();
        assert!(cache.lookup("abc", "hilbert", &json!({"max_degree": 10})).is_none());
        cache.store(&record(json!([1, 2]))).unwrap();
        cache.store(&record(json!([1, 2, 2]))).unwrap();
        let hit = cache.lookup("abc", "hilbert", &json!({"max_degree": 10})).unwrap();
        assert_eq!(hit.result, json!([1, 2, 2]));
        assert!(cache.lookup("abc", "hilbert", &json!({"max_degree": 11})).is_none());
        assert!(cache.lookup("abd", "hilbert", &json!({"max_degree": 10})).is_none());
    }

    #[test]
    fn stale_versions_and_garbage_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path()).unwrap();
        let mut old = record(json!(1));
        old.engine_version = "qhs-core/0.0.0".into();
        cache.store(&old).unwrap();
        fs::OpenOptions::new()
            .append(true)
            .open(cache.path())
            .unwrap()
            .write_all(b"not json\n")
            .unwrap();
        assert!(cache.lookup("abc", "hilbert", &json!({"max_degree": 10})).is_none());
    }
}
