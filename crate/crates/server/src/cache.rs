//! On-disk analysis cache.
//!
//! ```text
//! <root>/<dataset>/manifest.json
//! <root>/<dataset>/network.json        discretized snapshots
//! <root>/<dataset>/census.json         census matrix (+ census.csv)
//! <root>/<dataset>/metrics.json        network metrics per snapshot
//! <root>/<dataset>/layout.json         supergraph layout, lazily
//! <root>/<dataset>/gdv/t<T>-k<K>.json  graphlet degree vectors, lazily
//! <root>/<dataset>/graph/t<T>.json     network-view payloads, lazily
//! ```
//!
//! Every artifact is wrapped in an [`Envelope`] carrying the SHA-256 of the
//! manifest it was computed under. Files are written to a temporary file in
//! the same directory and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "MOTIFPIX_CACHE";
pub const DEFAULT_CACHE_DIR: &str = "motifpix-cache";
pub const DEFAULT_MAX_GRAPHLET_SIZE: usize = 4;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
    #[error("invalid dataset id `{0}`")]
    InvalidId(String),
    #[error("{artifact} has not been computed for dataset `{dataset}`")]
    Missing { dataset: String, artifact: String },
    #[error("{artifact} was computed under manifest {found}, current manifest is {expected}")]
    Stale {
        artifact: String,
        expected: String,
        found: String,
    },
    #[error("cache io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt cache file {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type CacheResult<T> = std::result::Result<T, CacheError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CacheError + '_ {
    move |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Counts reported by ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetSummary {
    pub snapshots: usize,
    pub nodes: usize,
    pub edges: usize,
    pub malformed_rows: usize,
    pub min_timestamp: i64,
}

/// Parameters every artifact depends on. Any change gives a new hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CacheManifest {
    pub dataset_id: String,
    pub source: PathBuf,
    pub bin_width: i64,
    pub null_count: usize,
    pub seed: u64,
    pub max_graphlet_size: usize,
    pub version: u32,
    pub summary: DatasetSummary,
}

impl CacheManifest {
    /// Hex SHA-256 of the manifest's JSON serialization.
    pub fn hash(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("manifest serializes"))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub manifest_hash: String,
    pub kind: String,
    pub data: T,
}

/// Writes `bytes` to `path` through a temporary file and an atomic rename, so
/// readers see the old or the new content, never a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> CacheResult<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut builder = tempfile::Builder::new();
    builder.prefix(".tmp-");
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| CacheError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CacheResult<T> {
    let bytes = std::fs::read(path).map_err(io_err(path))?;
    serde_json::from_slice(&bytes).map_err(|source| CacheError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Dataset ids become directory names, so they are restricted to a safe
/// alphabet.
pub fn validate_id(id: &str) -> CacheResult<()> {
    let ok = !id.is_empty()
        && id.len() <= 128
        && !id.starts_with('.')
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(CacheError::InvalidId(id.to_string()))
    }
}

/// Directory holding one subdirectory per dataset.
#[derive(Debug, Clone)]
pub struct CacheRoot {
    dir: PathBuf,
}

impl CacheRoot {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CacheRoot { dir: dir.into() }
    }

    /// `explicit`, else `$MOTIFPIX_CACHE`, else `./motifpix-cache`.
    pub fn resolve(explicit: Option<PathBuf>) -> Self {
        let dir = explicit
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        CacheRoot::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Manifests of all datasets, sorted by id. Directories without a
    /// readable manifest are skipped.
    pub fn datasets(&self) -> CacheResult<Vec<CacheManifest>> {
        let entries = match std::fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(io_err(&self.dir)(e)),
        };
        let mut out: Vec<CacheManifest> = entries
            .filter_map(|e| e.ok())
            .filter_map(|e| read_json(&e.path().join("manifest.json")).ok())
            .collect();
        out.sort_by(|a, b| a.dataset_id.cmp(&b.dataset_id));
        Ok(out)
    }

    pub fn open(&self, id: &str) -> CacheResult<DatasetCache> {
        validate_id(id)?;
        let dir = self.dir.join(id);
        let path = dir.join("manifest.json");
        if !path.exists() {
            return Err(CacheError::UnknownDataset(id.to_string()));
        }
        let manifest: CacheManifest = read_json(&path)?;
        Ok(DatasetCache { dir, manifest })
    }

    /// Writes a fresh manifest for `manifest.dataset_id`, replacing any
    /// previous one.
    pub fn create(&self, manifest: CacheManifest) -> CacheResult<DatasetCache> {
        validate_id(&manifest.dataset_id)?;
        let cache = DatasetCache {
            dir: self.dir.join(&manifest.dataset_id),
            manifest,
        };
        cache.write_manifest()?;
        Ok(cache)
    }
}

/// One dataset's directory and its current manifest.
#[derive(Debug, Clone)]
pub struct DatasetCache {
    dir: PathBuf,
    manifest: CacheManifest,
}

pub const NETWORK: &str = "network";
pub const CENSUS: &str = "census";
pub const METRICS: &str = "metrics";
pub const LAYOUT: &str = "layout";

impl DatasetCache {
    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn manifest(&self) -> &CacheManifest {
        &self.manifest
    }

    pub fn id(&self) -> &str {
        &self.manifest.dataset_id
    }

    pub fn manifest_hash(&self) -> String {
        self.manifest.hash()
    }

    pub fn write_manifest(&self) -> CacheResult<()> {
        let bytes = serde_json::to_vec_pretty(&self.manifest).expect("manifest serializes");
        atomic_write(&self.dir.join("manifest.json"), &bytes)
    }

    /// Replaces the manifest; artifacts written under the old one become
    /// stale.
    pub fn update_manifest(&mut self, manifest: CacheManifest) -> CacheResult<()> {
        self.manifest = manifest;
        self.write_manifest()
    }

    pub fn artifact_path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.json"))
    }

    pub fn gdv_name(t: usize, max_size: usize) -> String {
        format!("gdv/t{t}-k{max_size}")
    }

    pub fn graph_name(t: usize) -> String {
        format!("graph/t{t}")
    }

    /// Writes `data` in an envelope stamped with the current manifest hash
    /// and returns the bytes written.
    pub fn write_artifact<T: Serialize>(&self, name: &str, data: &T) -> CacheResult<Vec<u8>> {
        let envelope = Envelope {
            schema_version: SCHEMA_VERSION,
            manifest_hash: self.manifest_hash(),
            kind: name.split('/').next().unwrap_or(name).to_string(),
            data,
        };
        let bytes = serde_json::to_vec(&envelope).expect("artifact serializes");
        atomic_write(&self.artifact_path(name), &bytes)?;
        Ok(bytes)
    }

    pub fn write_text(&self, file: &str, text: &str) -> CacheResult<()> {
        atomic_write(&self.dir.join(file), text.as_bytes())
    }

    pub fn has_artifact(&self, name: &str) -> bool {
        self.artifact_path(name).exists()
    }

    /// Reads an artifact, failing with [`CacheError::Stale`] when it was
    /// computed under another manifest.
    pub fn read_artifact<T: DeserializeOwned>(&self, name: &str) -> CacheResult<T> {
        let path = self.artifact_path(name);
        if !path.exists() {
            return Err(CacheError::Missing {
                dataset: self.id().to_string(),
                artifact: name.to_string(),
            });
        }
        let envelope: Envelope<T> = read_json(&path)?;
        let expected = self.manifest_hash();
        if envelope.manifest_hash != expected {
            return Err(CacheError::Stale {
                artifact: name.to_string(),
                expected,
                found: envelope.manifest_hash,
            });
        }
        Ok(envelope.data)
    }

    /// Like [`read_artifact`](Self::read_artifact) but treats missing and
    /// stale artifacts as absent, for artifacts that can be recomputed.
    pub fn read_fresh<T: DeserializeOwned>(&self, name: &str) -> CacheResult<Option<T>> {
        match self.read_artifact(name) {
            Ok(v) => Ok(Some(v)),
            Err(CacheError::Missing { .. } | CacheError::Stale { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(id: &str) -> CacheManifest {
        CacheManifest {
            dataset_id: id.into(),
            source: "edges.csv".into(),
            bin_width: 1,
            null_count: 100,
            seed: 0,
            max_graphlet_size: 4,
            version: SCHEMA_VERSION,
            summary: DatasetSummary {
                snapshots: 1,
                nodes: 2,
                edges: 1,
                malformed_rows: 0,
                min_timestamp: 0,
            },
        }
    }

    #[test]
    fn hash_tracks_parameters() {
        let a = manifest("x");
        assert_eq!(a.hash(), manifest("x").hash());
        assert_eq!(a.hash().len(), 64);
        let b = CacheManifest { seed: 1, ..a.clone() };
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn artifacts_go_stale_when_manifest_changes() {
        let dir = tempfile::tempdir().unwrap();
        let root = CacheRoot::new(dir.path());
        let mut ds = root.create(manifest("d1")).unwrap();
        ds.write_artifact("census", &vec![1, 2, 3]).unwrap();
        assert_eq!(ds.read_artifact::<Vec<i32>>("census").unwrap(), vec![1, 2, 3]);

        let changed = CacheManifest {
            null_count: 5,
            ..ds.manifest().clone()
        };
        ds.update_manifest(changed).unwrap();
        assert!(matches!(ds.read_artifact::<Vec<i32>>("census"), Err(CacheError::Stale { .. })));
        assert_eq!(ds.read_fresh::<Vec<i32>>("census").unwrap(), None);
        assert!(matches!(ds.read_artifact::<Vec<i32>>("metrics"), Err(CacheError::Missing { .. })));

        let reopened = root.open("d1").unwrap();
        assert_eq!(reopened.manifest().null_count, 5);
        assert_eq!(root.datasets().unwrap().len(), 1);
    }

    #[test]
    fn ids_are_sanitized() {
        assert!(validate_id("bitcoin-otc_1.v2").is_ok());
        for bad in ["", "../x", "a/b", ".hidden", "a b"] {
            assert!(validate_id(bad).is_err(), "{bad}");
        }
        let root = CacheRoot::new("/nonexistent-root");
        assert!(matches!(root.open("nope"), Err(CacheError::UnknownDataset(_))));
        assert!(root.datasets().unwrap().is_empty());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/f.json");
        atomic_write(&p, b"one").unwrap();
        atomic_write(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path().join("sub")).unwrap().count(), 1);
    }
}
