//! Cached download of OEIS b-files.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::bfile::{is_valid_sequence_id, parse_bfile, BFileDocument, BFileError};

pub const OEIS_HOST: &str = "https://oeis.org";
pub const CACHE_DIR_ENV: &str = "HOLOREC_CACHE_DIR";
pub const OFFLINE_ENV: &str = "HOLOREC_OFFLINE";

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("invalid sequence id '{0}': expected 'A' followed by 6 or 7 digits")]
    InvalidId(String),
    #[error("{id} is not cached in {dir} and network access is disabled; pass a local file with --bfile")]
    Offline { id: String, dir: PathBuf },
    #[error("network error fetching {url}: {msg}; pass a local file with --bfile")]
    Network { url: String, msg: String },
    #[error("HTTP {status} fetching {url}")]
    Http { url: String, status: u16 },
    #[error("b-file for {id} is malformed: {source}")]
    Parse {
        id: String,
        #[source]
        source: BFileError,
    },
    #[error("cache I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Default cache location: `$HOLOREC_CACHE_DIR`, else `$XDG_CACHE_HOME/holorec`,
/// else `~/.cache/holorec`, else `./.holorec-cache`.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_DIR_ENV) {
        return dir.into();
    }
    if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME") {
        return Path::new(&xdg).join("holorec");
    }
    if let Some(home) = std::env::var_os("HOME") {
        return Path::new(&home).join(".cache").join("holorec");
    }
    PathBuf::from(".holorec-cache")
}

pub fn offline_from_env() -> bool {
    std::env::var(OFFLINE_ENV).is_ok_and(|v| !v.is_empty() && v != "0")
}

pub struct BFileCache {
    dir: PathBuf,
    offline: bool,
}

impl BFileCache {
    pub fn new(dir: impl Into<PathBuf>, offline: bool) -> Self {
        BFileCache {
            dir: dir.into(),
            offline,
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `b214615.txt` for `A214615`.
    pub fn file_name(id: &str) -> String {
        format!("b{}.txt", &id[1..])
    }

    pub fn path_for(&self, id: &str) -> PathBuf {
        self.dir.join(Self::file_name(id))
    }

    pub fn url_for(id: &str) -> String {
        format!("{OEIS_HOST}/{id}/{}", Self::file_name(id))
    }

    /// Cache first, then network. A fresh download is parsed before it is
    /// stored, and stored via write-to-temp-then-rename.
    pub fn fetch(&self, id: &str) -> Result<BFileDocument, FetchError> {
        if !is_valid_sequence_id(id) {
            return Err(FetchError::InvalidId(id.to_string()));
        }
        let path = self.path_for(id);
        let parse = |bytes: &[u8]| {
            let mut doc = parse_bfile(bytes).map_err(|source| FetchError::Parse {
                id: id.to_string(),
                source,
            })?;
            doc.sequence_id.get_or_insert_with(|| id.to_string());
            Ok(doc)
        };
        match fs::read(&path) {
            Ok(bytes) => return parse(&bytes),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(source) => return Err(FetchError::Io { path, source }),
        }
        if self.offline {
            return Err(FetchError::Offline {
                id: id.to_string(),
                dir: self.dir.clone(),
            });
        }
        let url = Self::url_for(id);
        let bytes = download(&url)?;
        let doc = parse(&bytes)?;
        self.store(&path, &bytes)?;
        Ok(doc)
    }

    fn store(&self, path: &Path, bytes: &[u8]) -> Result<(), FetchError> {
        let io = |source| FetchError::Io {
            path: path.to_path_buf(),
            source,
        };
        fs::create_dir_all(&self.dir).map_err(io)?;
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        fs::write(&tmp, bytes).map_err(io)?;
        fs::rename(&tmp, path).map_err(io)
    }
}

fn download(url: &str) -> Result<Vec<u8>, FetchError> {
    let resp = ureq::get(url).call().map_err(|e| match e {
        ureq::Error::Status(status, _) => FetchError::Http {
            url: url.to_string(),
            status,
        },
        ureq::Error::Transport(t) => FetchError::Network {
            url: url.to_string(),
            msg: t.to_string(),
        },
    })?;
    let mut bytes = Vec::new();
    resp.into_reader()
        .read_to_end(&mut bytes)
        .map_err(|e| FetchError::Network {
            url: url.to_string(),
            msg: e.to_string(),
        })?;
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn urls() {
        assert_eq!(
            BFileCache::url_for("A214615"),
            "https://oeis.org/A214615/b214615.txt"
        );
    }

    #[test]
    fn invalid_id_rejected_before_network() {
        let cache = BFileCache::new("/nonexistent/holorec-test", false);
        assert!(matches!(cache.fetch("X1"), Err(FetchError::InvalidId(_))));
    }
}
