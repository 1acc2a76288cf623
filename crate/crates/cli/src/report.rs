use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use qbivar::{NumericConfig, PairedSample, Result};

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub source: String,
    pub n: usize,
    /// sha256 of the file bytes, or of the canonical CSV for builtins.
    pub sha256: String,
}

/// Field order is the serialization order.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub command: Vec<String>,
    pub input: Option<InputInfo>,
    pub numeric_config: NumericConfig,
    pub results: T,
    pub warnings: Vec<String>,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load(spec: &str) -> Result<(PairedSample, InputInfo)> {
    let (s, sha) = if let Some(s) = PairedSample::builtin(spec) {
        let mut buf = Vec::new();
        s.write_csv(&mut buf)?;
        (s, digest(&buf))
    } else {
        let bytes = fs::read(spec)?;
        (PairedSample::read_csv(&bytes[..], spec)?, digest(&bytes))
    };
    let info = InputInfo { source: s.source.clone(), n: s.n(), sha256: sha };
    Ok((s, info))
}

pub fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

impl<T: Serialize> Report<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values serialize")
    }

    pub fn write(&self, stem: &Path) -> Result<PathBuf> {
        let path = with_suffix(stem, ".report.json");
        fs::write(&path, self.to_json() + "\n")?;
        Ok(path)
    }
}
