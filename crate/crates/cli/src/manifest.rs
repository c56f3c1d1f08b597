use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Provenance record written once per invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub spec_sha256: Vec<String>,
    pub seed: Vec<u64>,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<String>,
}

/// SHA-256 of the canonical JSON of an experiment spec. Thread count and
/// output location are not part of the spec.
pub fn spec_hash(command: &str, seed: u64, params: &Value) -> String {
    let canonical = serde_json::json!({ "command": command, "seed": seed, "params": params });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

pub fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_depends_on_spec_only() {
        let p = serde_json::json!({"n": 4, "eps": 0.1});
        let a = spec_hash("cover", 1, &p);
        assert_eq!(a, spec_hash("cover", 1, &p.clone()));
        assert_eq!(a.len(), 64);
        assert_ne!(a, spec_hash("cover", 2, &p));
        assert_ne!(a, spec_hash("vc", 1, &p));
    }
}
