//! On-disk store of expansions keyed by `(form, precision)`.
//!
//! Files hold the plain-text series format and are named by the SHA-256 of
//! `"<form>|<prec>"`. Writes go through a temporary file in the same
//! directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{Error, Result};
use crate::forms::FormSpec;
use crate::qseries::QSeries;

pub const ENV_VAR: &str = "WHMF_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".whmf-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `flag`, else `$WHMF_CACHE_DIR`, else `./.whmf-cache`.
    pub fn resolve(flag: Option<&Path>) -> Self {
        let dir = flag
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(ENV_VAR).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Self::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(spec: &FormSpec, prec: i64) -> String {
        hex::encode(Sha256::digest(format!("{spec}|{prec}").as_bytes()))
    }

    pub fn path(&self, spec: &FormSpec, prec: i64) -> PathBuf {
        self.dir.join(format!("{}.qs", Self::key(spec, prec)))
    }

    pub fn get(&self, spec: &FormSpec, prec: i64) -> Result<Option<QSeries>> {
        match fs::read_to_string(self.path(spec, prec)) {
            Ok(text) => QSeries::from_text(&text).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn put(&self, spec: &FormSpec, prec: i64, series: &QSeries) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(series.to_text().as_bytes())?;
        tmp.persist(self.path(spec, prec))
            .map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }

    pub fn expand(&self, spec: &FormSpec, prec: i64) -> Result<QSeries> {
        if let Some(s) = self.get(spec, prec)? {
            return Ok(s);
        }
        let s = spec.expand(prec)?;
        self.put(spec, prec, &s)?;
        Ok(s)
    }
}
