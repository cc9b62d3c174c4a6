//! Deterministic JSON reports.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct Versions {
    pub tool: &'static str,
    pub facts: u32,
}

impl Versions {
    pub fn current() -> Self {
        Versions { tool: env!("CARGO_PKG_VERSION"), facts: kuniform::catalog::facts_version() }
    }
}

/// Report printed by every subcommand. Field order is fixed and map keys are
/// sorted, so identical inputs give byte-identical output.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub verdict: &'static str,
    pub details: Value,
    pub versions: Versions,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// SHA-256 over each input as `<len>:<path name>:<bytes>`, in order.
#[derive(Default)]
pub struct InputDigest {
    hasher: Sha256,
}

impl InputDigest {
    pub fn add(&mut self, path: &Path, bytes: &[u8]) {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        self.hasher.update(format!("{}:{name}:", bytes.len()));
        self.hasher.update(bytes);
    }

    pub fn finish(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}
