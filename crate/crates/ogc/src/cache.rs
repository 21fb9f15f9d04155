//! Disk cache for enumerated bases: one JSON-lines file per slice plus a
//! manifest carrying the format version, the admissibility rules, and
//! per-file checksums. Writes go through a temporary file and an atomic
//! rename, so concurrent writers of the same slice converge byte-identically.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::basis::{BasisSlice, Flavor, FORMAT_VERSION};
use crate::canon::{GraphClass, Parity};
use crate::error::OgcError;
use crate::graph::{GraphJson, LabeledGraph};
use crate::skeleton::{SkelBasisSlice, SkelEdgeType, SkeletonGraph};

#[derive(Serialize, Deserialize, Default)]
pub struct Manifest {
    pub format_version: u32,
    pub rules: String,
    pub checksums: BTreeMap<String, String>,
}

fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

fn load_manifest(dir: &Path) -> Result<Manifest, OgcError> {
    let path = manifest_path(dir);
    if !path.exists() {
        return Ok(Manifest {
            format_version: FORMAT_VERSION,
            rules: default_rules_hash(),
            checksums: BTreeMap::new(),
        });
    }
    let text = fs::read_to_string(&path)?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| OgcError::CorruptCache(e.to_string()))?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(OgcError::VersionMismatch {
            found: manifest.format_version,
            expected: FORMAT_VERSION,
        });
    }
    Ok(manifest)
}

fn default_rules_hash() -> String {
    let rules = crate::graph::AdmissibilityRules::default();
    let json = serde_json::to_string(&rules).expect("rules serialize");
    hex_digest(json.as_bytes())
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn atomic_write(path: &Path, contents: &str) -> Result<(), OgcError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn slice_file_name(d: i64, v: u16, e: usize, flavor: Flavor) -> String {
    format!("basis_d{}_v{}_e{}_{}.jsonl", d, v, e, flavor.as_str())
}

/// Store a full-flavor slice; returns the file path.
pub fn store_basis(slice: &BasisSlice, cache_dir: &Path) -> Result<PathBuf, OgcError> {
    fs::create_dir_all(cache_dir)?;
    let name = slice_file_name(slice.d, slice.v, slice.e, Flavor::Full);
    let mut body = String::new();
    for class in &slice.classes {
        let json = serde_json::to_string(&GraphJson::from(&class.canonical))
            .map_err(|e| OgcError::Io(e.to_string()))?;
        body.push_str(&json);
        body.push('\n');
    }
    let path = cache_dir.join(&name);
    atomic_write(&path, &body)?;
    let mut manifest = load_manifest(cache_dir)?;
    manifest.checksums.insert(name, hex_digest(body.as_bytes()));
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| OgcError::Io(e.to_string()))?;
    atomic_write(&manifest_path(cache_dir), &text)?;
    Ok(path)
}

/// Load a full-flavor slice; Ok(None) when absent.
pub fn load_basis(
    d: i64,
    v: u16,
    e: usize,
    cache_dir: &Path,
) -> Result<Option<BasisSlice>, OgcError> {
    let name = slice_file_name(d, v, e, Flavor::Full);
    let path = cache_dir.join(&name);
    if !path.exists() {
        return Ok(None);
    }
    let manifest = load_manifest(cache_dir)?;
    let body = fs::read_to_string(&path)?;
    match manifest.checksums.get(&name) {
        None => return Ok(None),
        Some(sum) if *sum != hex_digest(body.as_bytes()) => {
            return Err(OgcError::CorruptCache(name));
        }
        Some(_) => {}
    }
    let parity = Parity::of(d);
    let mut classes = Vec::new();
    for line in body.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let json: GraphJson =
            serde_json::from_str(line).map_err(|err| OgcError::CorruptCache(err.to_string()))?;
        let graph = LabeledGraph::try_from(json)?;
        classes.push(GraphClass { canonical: graph, parity });
    }
    Ok(Some(BasisSlice { d, v, e, classes, format_version: FORMAT_VERSION }))
}

#[derive(Serialize, Deserialize)]
struct SkelJson {
    v: u16,
    edges: Vec<(u16, u16, char)>,
}

/// Store a skeleton slice.
pub fn store_skeleton_basis(
    slice: &SkelBasisSlice,
    cache_dir: &Path,
) -> Result<PathBuf, OgcError> {
    fs::create_dir_all(cache_dir)?;
    let name = slice_file_name(slice.d, slice.v, slice.e, Flavor::Skeleton1);
    let mut body = String::new();
    for class in &slice.classes {
        let edges = class
            .edges()
            .iter()
            .map(|&(t, h, ty)| {
                let c = match ty {
                    SkelEdgeType::Arrow => '>',
                    SkelEdgeType::Zigzag => 'S',
                    SkelEdgeType::Marked => 'E',
                };
                (t, h, c)
            })
            .collect();
        let json = serde_json::to_string(&SkelJson { v: class.vertex_count(), edges })
            .map_err(|e| OgcError::Io(e.to_string()))?;
        body.push_str(&json);
        body.push('\n');
    }
    let path = cache_dir.join(&name);
    atomic_write(&path, &body)?;
    let mut manifest = load_manifest(cache_dir)?;
    manifest.checksums.insert(name, hex_digest(body.as_bytes()));
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| OgcError::Io(e.to_string()))?;
    atomic_write(&manifest_path(cache_dir), &text)?;
    Ok(path)
}

pub fn load_skeleton_basis(
    d: i64,
    v: u16,
    e: usize,
    cache_dir: &Path,
) -> Result<Option<SkelBasisSlice>, OgcError> {
    let name = slice_file_name(d, v, e, Flavor::Skeleton1);
    let path = cache_dir.join(&name);
    if !path.exists() {
        return Ok(None);
    }
    let manifest = load_manifest(cache_dir)?;
    let body = fs::read_to_string(&path)?;
    match manifest.checksums.get(&name) {
        None => return Ok(None),
        Some(sum) if *sum != hex_digest(body.as_bytes()) => {
            return Err(OgcError::CorruptCache(name));
        }
        Some(_) => {}
    }
    let mut classes = Vec::new();
    for line in body.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let json: SkelJson =
            serde_json::from_str(line).map_err(|err| OgcError::CorruptCache(err.to_string()))?;
        let edges = json
            .edges
            .into_iter()
            .map(|(t, h, c)| {
                let ty = match c {
                    '>' => Ok(SkelEdgeType::Arrow),
                    'S' => Ok(SkelEdgeType::Zigzag),
                    'E' => Ok(SkelEdgeType::Marked),
                    other => Err(OgcError::CorruptCache(format!("edge type {other}"))),
                }?;
                Ok((t, h, ty))
            })
            .collect::<Result<Vec<_>, OgcError>>()?;
        classes.push(SkeletonGraph::new(json.v, edges)?);
    }
    Ok(Some(SkelBasisSlice { d, v, e, classes, format_version: FORMAT_VERSION }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_basis;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let slice = enumerate_basis(3, 3, 4).unwrap();
        store_basis(&slice, dir.path()).unwrap();
        let loaded = load_basis(3, 3, 4, dir.path()).unwrap().unwrap();
        assert_eq!(loaded, slice);
    }

    #[test]
    fn missing_on_empty_dir() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load_basis(3, 2, 2, dir.path()).unwrap().is_none());
    }

    #[test]
    fn truncation_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let slice = enumerate_basis(3, 3, 4).unwrap();
        let path = store_basis(&slice, dir.path()).unwrap();
        let body = fs::read_to_string(&path).unwrap();
        fs::write(&path, &body[..body.len() / 2]).unwrap();
        assert!(matches!(
            load_basis(3, 3, 4, dir.path()),
            Err(OgcError::CorruptCache(_))
        ));
    }

    #[test]
    fn version_mismatch_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let slice = enumerate_basis(3, 2, 2).unwrap();
        store_basis(&slice, dir.path()).unwrap();
        let mpath = dir.path().join("manifest.json");
        let text = fs::read_to_string(&mpath).unwrap();
        let bumped = text.replace(
            &format!("\"format_version\": {FORMAT_VERSION}"),
            "\"format_version\": 999",
        );
        assert_ne!(text, bumped);
        fs::write(&mpath, bumped).unwrap();
        assert!(matches!(
            load_basis(3, 2, 2, dir.path()),
            Err(OgcError::VersionMismatch { found: 999, .. })
        ));
    }

    #[test]
    fn skeleton_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let slices = crate::skeleton::o1_basis_by_loop_order(3, 2).unwrap();
        for slice in &slices {
            store_skeleton_basis(slice, dir.path()).unwrap();
            let loaded = load_skeleton_basis(slice.d, slice.v, slice.e, dir.path())
                .unwrap()
                .unwrap();
            assert_eq!(&loaded, slice);
        }
    }
}
