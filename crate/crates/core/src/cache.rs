//! Append-only JSON-lines store of computed records.
//!
//! Each line holds a key (group name, operation, parameter hash) and the
//! record exactly as first serialized, so a hit reproduces the original
//! bytes, `elapsed_ms` included. The file is held under an exclusive
//! advisory lock while a [`ResultCache`] is open.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::group::GroupTable;

pub const CACHE_ENV: &str = "CRITNUM_CACHE";
pub const DEFAULT_CACHE_PATH: &str = "critnum-cache.jsonl";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cache record does not serialize: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub group: String,
    pub op: String,
    pub params: String,
}

impl CacheKey {
    /// The parameter hash covers the group's table fingerprint, so a
    /// different table under the same name never hits.
    pub fn new(g: &GroupTable, op: &str, params: &impl Serialize) -> Result<Self, CacheError> {
        CacheKey::named(g.name(), &g.fingerprint(), op, params)
    }

    /// For runs over a fixed family of groups rather than one table.
    pub fn named(name: &str, fingerprint: &str, op: &str, params: &impl Serialize) -> Result<Self, CacheError> {
        let mut h = Sha256::new();
        h.update(fingerprint.as_bytes());
        h.update([0]);
        h.update(serde_json::to_vec(params)?);
        let digest = h.finalize();
        Ok(CacheKey {
            group: name.to_string(),
            op: op.to_string(),
            params: digest[..16].iter().map(|b| format!("{b:02x}")).collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct Line {
    #[serde(flatten)]
    key: CacheKey,
    record: Box<RawValue>,
}

pub struct ResultCache {
    path: PathBuf,
    file: File,
}

impl ResultCache {
    /// Opens (creating if needed) and locks the store at `path`.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, CacheError> {
        let path = path.as_ref().to_path_buf();
        let io_err = |source| CacheError::Io {
            path: path.clone(),
            source,
        };
        let file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)
            .map_err(io_err)?;
        file.lock().map_err(io_err)?;
        Ok(ResultCache { path, file })
    }

    /// The store named by `CRITNUM_CACHE`, or `./critnum-cache.jsonl`.
    pub fn from_env() -> Result<Self, CacheError> {
        let path = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_PATH));
        ResultCache::open(path)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn io(&self, source: io::Error) -> CacheError {
        CacheError::Io {
            path: self.path.clone(),
            source,
        }
    }

    /// The stored JSON for `key`, byte for byte. Unreadable lines are
    /// skipped with a warning.
    pub fn get(&mut self, key: &CacheKey) -> Result<Option<String>, CacheError> {
        self.file.seek(SeekFrom::Start(0)).map_err(|e| self.io(e))?;
        let reader = BufReader::new(&self.file);
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| CacheError::Io {
                path: self.path.clone(),
                source: e,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Line>(&line) {
                Ok(entry) if entry.key == *key => return Ok(Some(entry.record.get().to_string())),
                Ok(_) => {}
                Err(e) => log::warn!("{}:{}: skipping corrupt cache line: {e}", self.path.display(), i + 1),
            }
        }
        Ok(None)
    }

    /// Appends `record` under `key` and returns its serialized form.
    pub fn put(&mut self, key: &CacheKey, record: &impl Serialize) -> Result<String, CacheError> {
        let json = serde_json::to_string(record)?;
        let line = serde_json::to_string(&Line {
            key: key.clone(),
            record: RawValue::from_string(json.clone())?,
        })?;
        writeln!(self.file, "{line}").map_err(|e| self.io(e))?;
        self.file.flush().map_err(|e| self.io(e))?;
        Ok(json)
    }

    /// Returns the cached JSON for `key`, or computes, stores and returns it.
    /// The flag is true on a hit.
    pub fn get_or_insert<T, E>(
        &mut self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<T, E>,
    ) -> Result<(String, bool), E>
    where
        T: Serialize,
        E: From<CacheError>,
    {
        if let Some(hit) = self.get(key)? {
            return Ok((hit, true));
        }
        let record = compute()?;
        Ok((self.put(key, &record)?, false))
    }
}
