//! Optional download of real data sets into a local cache.
//!
//! The manifest is plain text, one data set per line:
//! `name url sha256`, where the checksum may be `-` when unknown. Files with
//! a known checksum are verified before they are moved into the cache;
//! files without one are stored and reported as unverified together with
//! the digest that was computed.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub url: String,
    pub sha256: Option<String>,
}

const LIBSVM_BASE: &str = "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets";

/// Uncompressed LIBSVM data sets. No checksums are pinned.
const BUILTIN: &[(&str, &str)] = &[
    ("a9a", "binary/a9a"),
    ("cadata", "regression/cadata"),
    ("cod-rna", "binary/cod-rna"),
    ("connect-4", "multiclass/connect-4"),
    ("phishing", "binary/phishing"),
    ("sensorless", "multiclass/Sensorless"),
    ("skin_nonskin", "binary/skin_nonskin"),
    ("w8a", "binary/w8a"),
];

pub fn builtin_manifest() -> Vec<ManifestEntry> {
    BUILTIN
        .iter()
        .map(|(name, path)| ManifestEntry { name: (*name).into(), url: format!("{LIBSVM_BASE}/{path}"), sha256: None })
        .collect()
}

/// Parse manifest text; blank lines and lines starting with `#` are
/// ignored.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [name, url, sum] = fields[..] else {
            return Err(BenchError::ConfigInvalid(format!("manifest line {}: expected `name url sha256`", k + 1)));
        };
        let sha256 = match sum {
            "-" => None,
            s if s.len() == 64 && s.chars().all(|c| c.is_ascii_hexdigit()) => Some(s.to_ascii_lowercase()),
            s => return Err(BenchError::ConfigInvalid(format!("manifest line {}: bad checksum {s:?}", k + 1))),
        };
        out.push(ManifestEntry { name: name.into(), url: url.into(), sha256 });
    }
    Ok(out)
}

pub trait Downloader {
    fn download(&self, url: &str) -> Result<Vec<u8>>;
}

/// Blocking HTTP(S) download.
pub struct HttpDownloader;

impl Downloader for HttpDownloader {
    fn download(&self, url: &str) -> Result<Vec<u8>> {
        let net = |e: ureq::Error| BenchError::NetworkError(format!("{url}: {e}"));
        let resp = ureq::get(url).call().map_err(net)?;
        let mut buf = Vec::new();
        resp.into_body()
            .into_reader()
            .read_to_end(&mut buf)
            .map_err(|e| BenchError::NetworkError(format!("{url}: {e}")))?;
        Ok(buf)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FetchStatus {
    Cached,
    Verified,
    /// Stored without a reference checksum; `sha256` is what was received.
    Unverified { sha256: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchReport {
    pub name: String,
    pub path: PathBuf,
    pub status: FetchStatus,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Download `name` into `cache_dir` unless it is already there.
pub fn fetch_dataset(
    name: &str,
    cache_dir: &Path,
    manifest: &[ManifestEntry],
    downloader: &dyn Downloader,
) -> Result<FetchReport> {
    let entry = manifest.iter().find(|e| e.name == name).ok_or_else(|| {
        let known: Vec<&str> = manifest.iter().map(|e| e.name.as_str()).collect();
        BenchError::ConfigInvalid(format!("unknown dataset {name:?}; known: {}", known.join(", ")))
    })?;
    let path = cache_dir.join(name);
    if path.exists() {
        return Ok(FetchReport { name: name.into(), path, status: FetchStatus::Cached });
    }
    fs::create_dir_all(cache_dir)?;
    let bytes = downloader.download(&entry.url)?;
    let got = sha256_hex(&bytes);
    let partial = cache_dir.join(format!("{name}.part"));
    fs::write(&partial, &bytes)?;
    let status = match &entry.sha256 {
        Some(expected) if *expected != got => {
            fs::remove_file(&partial)?;
            return Err(BenchError::ChecksumMismatch { name: name.into(), expected: expected.clone(), got });
        }
        Some(_) => FetchStatus::Verified,
        None => FetchStatus::Unverified { sha256: got },
    };
    fs::rename(&partial, &path)?;
    Ok(FetchReport { name: name.into(), path, status })
}
