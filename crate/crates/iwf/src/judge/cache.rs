//! On-disk response cache keyed by (prompt hash, model name).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt cache entry at {path}: {source}")]
    Corrupt {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    prompt_sha256: String,
    model: String,
    raw: String,
}

/// One JSON file per (prompt hash, model). Distinct keys never share a file,
/// so concurrent writers of distinct keys are safe; same-key writers are
/// last-write-wins via atomic rename.
#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

impl ResponseCache {
    pub fn new(dir: impl Into<PathBuf>) -> ResponseCache {
        ResponseCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn key_path(&self, prompt: &str, model: &str) -> (String, PathBuf) {
        let hash = hex_sha256(prompt);
        let model_tag: String = model
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
            .collect();
        let path = self.dir.join(format!("{hash}-{model_tag}.json"));
        (hash, path)
    }

    /// Cached raw response text, if present.
    pub fn get(&self, prompt: &str, model: &str) -> Result<Option<String>, CacheError> {
        let (_, path) = self.key_path(prompt, model);
        match fs::read_to_string(&path) {
            Ok(text) => {
                let entry: CacheEntry = serde_json::from_str(&text)
                    .map_err(|source| CacheError::Corrupt { path: path.clone(), source })?;
                Ok(Some(entry.raw))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(source) => Err(CacheError::Io { path, source }),
        }
    }

    pub fn put(&self, prompt: &str, model: &str, raw: &str) -> Result<(), CacheError> {
        let (hash, path) = self.key_path(prompt, model);
        let io_err = |source, p: &Path| CacheError::Io { path: p.to_path_buf(), source };
        fs::create_dir_all(&self.dir).map_err(|e| io_err(e, &self.dir))?;
        let entry = CacheEntry {
            prompt_sha256: hash,
            model: model.to_string(),
            raw: raw.to_string(),
        };
        let body = serde_json::to_string_pretty(&entry).expect("serializable entry");
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        fs::write(&tmp, body).map_err(|e| io_err(e, &tmp))?;
        fs::rename(&tmp, &path).map_err(|e| io_err(e, &path))?;
        Ok(())
    }
}

pub fn hex_sha256(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
