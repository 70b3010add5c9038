//! On-disk sweep cache: one file per (config hash, method) plus a manifest.
//!
//! Every file is written to a temporary sibling and renamed into place, so a
//! reader never sees a partial entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use subrad_core::Method;
use tempfile::NamedTempFile;

use crate::config::VERSION_STAMP;
use crate::error::CliError;

/// Environment variable that overrides `cache_dir` from the config.
pub const CACHE_DIR_ENV: &str = "SUBRAD_CACHE_DIR";

const MANIFEST: &str = "manifest.tsv";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|source| CliError::Unwritable { path: dir.clone(), source })?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, key: &str, method: Method) -> PathBuf {
        self.dir.join(format!("{key}-{method}.csv"))
    }

    fn header(key: &str, method: Method, rows: usize) -> String {
        format!("# {VERSION_STAMP} {key} {method} {rows}")
    }

    /// Cached rows, if an entry exists with the expected stamp and length.
    pub fn load(&self, key: &str, method: Method, rows: usize) -> Option<Vec<String>> {
        let text = fs::read_to_string(self.entry_path(key, method)).ok()?;
        let mut lines = text.lines();
        if lines.next()? != Self::header(key, method, rows) {
            return None;
        }
        let out: Vec<String> = lines.map(str::to_owned).collect();
        (out.len() == rows).then_some(out)
    }

    pub fn store(&self, key: &str, method: Method, rows: &[String], description: &str) -> Result<(), CliError> {
        let mut text = Self::header(key, method, rows.len());
        for r in rows {
            text.push('\n');
            text.push_str(r);
        }
        text.push('\n');
        write_atomic(&self.entry_path(key, method), text.as_bytes())?;
        self.record(key, method, description)
    }

    /// Adds `key  method  description` to the manifest if it is not there.
    fn record(&self, key: &str, method: Method, description: &str) -> Result<(), CliError> {
        let path = self.dir.join(MANIFEST);
        let mut text = fs::read_to_string(&path).unwrap_or_default();
        let line = format!("{key}\t{method}\t{description}");
        if text.lines().any(|l| l == line) {
            return Ok(());
        }
        text.push_str(&line);
        text.push('\n');
        write_atomic(&path, text.as_bytes())
    }
}

/// Write-temp-then-rename within the destination directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let unwritable = |source| CliError::Unwritable { path: path.to_path_buf(), source };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir).map_err(unwritable)?;
    tmp.write_all(bytes).map_err(unwritable)?;
    tmp.persist(path).map_err(|e| unwritable(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_stale_entries() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let rows = vec!["a".to_string(), "b".to_string()];
        cache.store("abc", Method::DirectSum, &rows, "cfg").unwrap();
        cache.store("abc", Method::DirectSum, &rows, "cfg").unwrap();
        assert_eq!(cache.load("abc", Method::DirectSum, 2), Some(rows));
        assert_eq!(cache.load("abc", Method::DirectSum, 3), None);
        assert_eq!(cache.load("abc", Method::Infinite, 2), None);
        let manifest = fs::read_to_string(dir.path().join(MANIFEST)).unwrap();
        assert_eq!(manifest.lines().count(), 1);
        // an entry from another build is ignored
        let path = cache.entry_path("abc", Method::DirectSum);
        let forged = fs::read_to_string(&path).unwrap().replace(VERSION_STAMP, "subrad-0.0.0-cache-0");
        fs::write(&path, forged).unwrap();
        assert_eq!(cache.load("abc", Method::DirectSum, 2), None);
    }
}
