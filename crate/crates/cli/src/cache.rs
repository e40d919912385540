//! On-disk result cache keyed by a SHA-256 content hash.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_DIR_ENV: &str = "GALOIS_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub tool_version: String,
    pub exit_code: i32,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookup {
    Hit(CacheEntry),
    Miss,
    /// A stored entry was unreadable; the message is meant for stderr.
    Corrupt(String),
}

pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache::with_version(dir, env!("CARGO_PKG_VERSION"))
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Cache {
            dir: dir.into(),
            version: version.into(),
        }
    }

    /// The flag wins over the environment; no cache when neither is set.
    pub fn from_settings(flag: Option<&Path>) -> Option<Self> {
        flag.map(Path::to_path_buf)
            .or_else(|| {
                std::env::var_os(CACHE_DIR_ENV)
                    .filter(|v| !v.is_empty())
                    .map(PathBuf::from)
            })
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hash of the operation, its canonical input, the bounds and the tool version.
    pub fn key(&self, operation: &str, canonical_input: &str, bounds: &str) -> String {
        let mut h = Sha256::new();
        for part in [operation, canonical_input, bounds, self.version.as_str()] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Lookup {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(format!("cannot read {}: {e}", path.display())),
        };
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(entry) if entry.key == key && entry.tool_version == self.version => Lookup::Hit(entry),
            Ok(_) => Lookup::Miss,
            Err(e) => Lookup::Corrupt(format!("ignoring corrupt cache entry {}: {e}", path.display())),
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn store(&self, key: &str, exit_code: i32, output: &str) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry {
            key: key.to_string(),
            tool_version: self.version.clone(),
            exit_code,
            output: output.to_string(),
        };
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(&entry)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))
    }
}
