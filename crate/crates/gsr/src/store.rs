//! On-disk results store.
//!
//! ```text
//! <root>/structures/<digest>.gsr.json
//! <root>/reports/<digest>.report.json
//! <root>/index.json
//! ```
//!
//! The digest is the SHA-256 of the structure file's bytes. Every file is
//! written to a temporary name in the same directory and renamed into
//! place, so readers never observe a partial file. The index is derived
//! from the structure files alone and can be rebuilt at any time.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use gsr_core::classify::content_digest;
use gsr_core::radicals::{jacobson_radical, Side};
use gsr_core::spectra::spectrum;
use gsr_core::{symmetry_profile, validate, GammaSemiring, Subset};
use serde::{Deserialize, Serialize};

use crate::format::{parse_structure, serialize_structure, ParseError};

pub const STRUCTURE_SUFFIX: &str = ".gsr.json";
pub const REPORT_SUFFIX: &str = ".report.json";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {cause}")]
    Io { path: PathBuf, cause: io::Error },
    #[error("{path}: {cause}")]
    Parse { path: PathBuf, cause: ParseError },
    #[error("{path}: file name does not match content digest {digest}")]
    DigestMismatch { path: PathBuf, digest: String },
    #[error(transparent)]
    Core(#[from] gsr_core::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |cause| StoreError::Io {
        path: path.to_path_buf(),
        cause,
    }
}

/// Write `bytes` to `path` through a uniquely named sibling and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("file");
    let tmp = dir.join(format!(
        ".{name}.{}.{}.tmp",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(bytes).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path)(e)
    })
}

/// Flags recorded per structure in the index.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub valid: bool,
    /// μ is invariant under every permutation of its arguments.
    pub symmetric: bool,
    /// The two-sided Jacobson radical is `{0}`; absent for invalid structures.
    pub j_zero: Option<bool>,
    /// Number of two-sided primes; absent for invalid structures.
    pub spectrum_size: Option<usize>,
}

impl IndexEntry {
    pub fn of(s: &GammaSemiring) -> Result<Self, StoreError> {
        let valid = validate(s).valid;
        let (j_zero, spectrum_size) = if valid {
            let j = jacobson_radical(s, Side::Two)?;
            (
                Some(!j.empty_family && j.set == Subset::zero()),
                Some(spectrum(s, Side::Two)?.len()),
            )
        } else {
            (None, None)
        };
        Ok(IndexEntry {
            m: s.m(),
            n: s.n(),
            r: s.r(),
            valid,
            symmetric: symmetry_profile(s).is_empty(),
            j_zero,
            spectrum_size,
        })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
pub struct Index {
    pub format_version: u64,
    pub entries: BTreeMap<String, IndexEntry>,
}

impl Index {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("index serializes");
        out.push('\n');
        out
    }
}

pub struct Store {
    root: PathBuf,
}

impl Store {
    /// Open (creating if needed) a store rooted at `root`.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        for sub in ["structures", "reports"] {
            let p = root.join(sub);
            fs::create_dir_all(&p).map_err(io_err(&p))?;
        }
        Ok(Store { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn structure_path(&self, digest: &str) -> PathBuf {
        self.root
            .join("structures")
            .join(format!("{digest}{STRUCTURE_SUFFIX}"))
    }

    pub fn report_path(&self, digest: &str) -> PathBuf {
        self.root
            .join("reports")
            .join(format!("{digest}{REPORT_SUFFIX}"))
    }

    pub fn index_path(&self) -> PathBuf {
        self.root.join("index.json")
    }

    /// Store a structure under its content digest and return the digest.
    pub fn put_structure(&self, s: &GammaSemiring) -> Result<String, StoreError> {
        let digest = content_digest(s).hex();
        write_atomic(
            &self.structure_path(&digest),
            serialize_structure(s).as_bytes(),
        )?;
        Ok(digest)
    }

    pub fn put_report(&self, digest: &str, json: &str) -> Result<(), StoreError> {
        write_atomic(&self.report_path(digest), json.as_bytes())
    }

    /// Every stored structure, ordered by digest. File names are checked
    /// against content.
    pub fn structures(&self) -> Result<Vec<(String, GammaSemiring)>, StoreError> {
        read_structure_dir(&self.root.join("structures"))
    }

    /// Recompute the index from the stored structures and replace it
    /// atomically.
    pub fn rebuild_index(&self) -> Result<Index, StoreError> {
        let mut index = Index {
            format_version: 1,
            entries: BTreeMap::new(),
        };
        for (digest, s) in self.structures()? {
            index.entries.insert(digest, IndexEntry::of(&s)?);
        }
        write_atomic(&self.index_path(), index.to_json().as_bytes())?;
        Ok(index)
    }

    pub fn read_index(&self) -> Result<Index, StoreError> {
        let path = self.index_path();
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        serde_json::from_str(&text).map_err(|e| StoreError::Parse {
            path,
            cause: ParseError {
                line: Some(e.line()),
                column: Some(e.column()),
                message: e.to_string(),
            },
        })
    }
}

/// Read every `*.gsr.json` in a directory, ordered by file name. A file
/// whose stem looks like a digest must match its content.
pub fn read_structure_dir(dir: &Path) -> Result<Vec<(String, GammaSemiring)>, StoreError> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .filter(|n| n.ends_with(STRUCTURE_SUFFIX) && !n.starts_with('.'))
        .collect();
    names.sort();
    let mut out = Vec::with_capacity(names.len());
    for name in names {
        let path = dir.join(&name);
        let s = read_structure(&path)?;
        let stem = name.trim_end_matches(STRUCTURE_SUFFIX).to_string();
        let digest = content_digest(&s).hex();
        if is_digest(&stem) && stem != digest {
            return Err(StoreError::DigestMismatch { path, digest });
        }
        out.push((stem, s));
    }
    Ok(out)
}

pub fn read_structure(path: &Path) -> Result<GammaSemiring, StoreError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_structure(&text).map_err(|cause| StoreError::Parse {
        path: path.to_path_buf(),
        cause,
    })
}

fn is_digest(stem: &str) -> bool {
    stem.len() == 64 && stem.bytes().all(|b| b.is_ascii_hexdigit())
}
