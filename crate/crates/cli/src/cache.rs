//! On-disk cache of pair measures, keyed by the SHA-256 of the body, the
//! method and the serialization format version.

use std::fs;
use std::path::{Path, PathBuf};

use casimir_core::geometry::density::FORMAT_VERSION;
use casimir_core::{pair_distance_density, Body, DensityMethod, PairDistanceDensity};
use serde_json::json;

use crate::run::sha256_hex;

pub struct Cache {
    dir: Option<PathBuf>,
}

pub fn key(body: &Body, method: DensityMethod) -> String {
    let text =
        json!({ "body": body, "method": method, "format_version": FORMAT_VERSION }).to_string();
    sha256_hex(text.as_bytes())
}

impl Cache {
    pub fn new(dir: &Path, enabled: bool) -> Self {
        Cache {
            dir: enabled.then(|| dir.to_path_buf()),
        }
    }

    fn file(&self, body: &Body, method: DensityMethod) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}.json", key(body, method))))
    }

    fn load(path: &Path, body: &Body) -> Option<PairDistanceDensity> {
        let text = fs::read_to_string(path).ok()?;
        let p: PairDistanceDensity = serde_json::from_str(&text).ok()?;
        (p.format_version == FORMAT_VERSION && p.body == *body).then_some(p)
    }

    /// Cached measure, or a fresh one that is then stored. Unreadable or
    /// stale entries are recomputed; failures to store are ignored.
    pub fn density(
        &self,
        body: &Body,
        method: DensityMethod,
    ) -> casimir_core::Result<PairDistanceDensity> {
        let file = self.file(body, method);
        if let Some(p) = file.as_deref().and_then(|f| Self::load(f, body)) {
            return Ok(p);
        }
        let p = pair_distance_density(body, method)?;
        if let Some(f) = file {
            if let Some(parent) = f.parent() {
                let _ = fs::create_dir_all(parent);
            }
            if let Ok(text) = serde_json::to_string(&p) {
                let tmp = f.with_extension("tmp");
                if fs::write(&tmp, text).is_ok() {
                    let _ = fs::rename(&tmp, &f);
                }
            }
        }
        Ok(p)
    }
}

pub struct Entry {
    pub key: String,
    pub body: String,
    pub provenance: String,
    pub bytes: u64,
}

pub fn list(dir: &Path) -> std::io::Result<Vec<Entry>> {
    let mut out = Vec::new();
    if !dir.exists() {
        return Ok(out);
    }
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_none_or(|e| e != "json") {
            continue;
        }
        let bytes = fs::metadata(&path)?.len();
        let key = path.file_stem().unwrap().to_string_lossy().into_owned();
        let parsed: Option<PairDistanceDensity> = fs::read_to_string(&path)
            .ok()
            .and_then(|t| serde_json::from_str(&t).ok());
        let (body, provenance) = match parsed {
            Some(p) => (
                serde_json::to_string(&p.body).unwrap_or_default(),
                serde_json::to_string(&p.provenance).unwrap_or_default(),
            ),
            None => ("unreadable".into(), String::new()),
        };
        out.push(Entry {
            key,
            body,
            provenance,
            bytes,
        });
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(out)
}

/// Removes every cache entry; returns how many were removed.
pub fn clear(dir: &Path) -> std::io::Result<usize> {
    let mut n = 0;
    if !dir.exists() {
        return Ok(0);
    }
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json" || e == "tmp") {
            fs::remove_file(path)?;
            n += 1;
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cached_measure_is_identical_to_fresh() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path(), true);
        let body = Body::cube(1.0).unwrap();
        let method = DensityMethod::Grid { resolution: 32 };
        let fresh = cache.density(&body, method).unwrap();
        assert_eq!(list(dir.path()).unwrap().len(), 1);
        let again = cache.density(&body, method).unwrap();
        assert_eq!(
            serde_json::to_string(&fresh).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
        assert_ne!(
            key(&body, method),
            key(&body, DensityMethod::Grid { resolution: 33 })
        );
        assert_eq!(clear(dir.path()).unwrap(), 1);
        assert!(list(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn corrupt_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path(), true);
        let body = Body::ball(1.0).unwrap();
        let method = DensityMethod::Analytic;
        fs::write(dir.path().join(format!("{}.json", key(&body, method))), "{").unwrap();
        assert!(cache.density(&body, method).is_ok());
    }
}
