use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance embedded in every artifact. Wall time is kept out of it so
/// that equal manifests give byte-identical outputs; it goes to a separate
/// timing file instead.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunManifest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_sha256: Option<String>,
    pub seed: u64,
    pub entry_bound: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, entry_bound: u32) -> Self {
        RunManifest {
            command: command.to_string(),
            seed,
            entry_bound,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            ..Default::default()
        }
    }

    pub fn with_config(mut self, path: &std::path::Path, bytes: &[u8]) -> Self {
        self.config_path = Some(path.display().to_string());
        self.config_sha256 = Some(format!("{:x}", Sha256::digest(bytes)));
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub command: String,
    pub wall_time_ms: u128,
}
