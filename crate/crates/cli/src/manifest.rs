//! Run manifests: every invocation emits exactly one, carrying the command,
//! its parameters, and a digest of the results that is stable across reruns
//! and thread counts.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Failure;

/// Keys stripped before digesting: run-dependent measurements that carry no
/// information about the computed results.
const VOLATILE_KEYS: [&str; 4] = ["wall_time_ms", "nodes_explored", "unix_seconds", "elapsed_ms"];

#[derive(Serialize, Clone)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub threads: usize,
    pub unix_seconds: u64,
    pub artifact_version: String,
    pub results_digest: String,
}

/// Drops volatile keys recursively. serde_json maps iterate sorted (the
/// default BTreeMap backing), so the serialization is already canonical.
fn strip_volatile(v: &Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| !VOLATILE_KEYS.contains(&k.as_str()))
                .map(|(k, val)| (k.clone(), strip_volatile(val)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(strip_volatile).collect()),
        other => other.clone(),
    }
}

pub fn build_manifest(
    command: &str,
    parameters: BTreeMap<String, Value>,
    seed: u64,
    results: &Value,
) -> RunManifest {
    let canonical = json!({
        "command": command,
        "parameters": parameters,
        "results": strip_volatile(results),
        "seed": seed,
    });
    let bytes = serde_json::to_vec(&canonical).expect("canonical report serializes");
    let digest = Sha256::digest(&bytes);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    RunManifest {
        command: command.to_owned(),
        parameters,
        seed,
        threads: rayon::current_num_threads(),
        unix_seconds: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        artifact_version: env!("CARGO_PKG_VERSION").to_owned(),
        results_digest: hex,
    }
}

/// Where a command's primary document goes.
pub enum OutTarget {
    Stdout,
    File(PathBuf),
}

impl OutTarget {
    pub fn write(&self, text: &str) -> Result<(), Failure> {
        match self {
            OutTarget::Stdout => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.write_all(b"\n"))
                    .map_err(|e| Failure::Io(format!("writing to stdout: {e}")))
            }
            OutTarget::File(path) => std::fs::write(path, format!("{text}\n"))
                .map_err(|e| Failure::Io(format!("writing {}: {e}", path.display()))),
        }
    }
}

/// Assembles the single output document {"manifest": ..., key: results}
/// and writes it to the target.
pub fn emit_document(
    command: &str,
    parameters: BTreeMap<String, Value>,
    seed: u64,
    key: &str,
    results: Value,
    target: &OutTarget,
) -> Result<(), Failure> {
    let manifest = build_manifest(command, parameters, seed, &results);
    let doc = json!({"manifest": manifest, key: results});
    let text = serde_json::to_string_pretty(&doc).expect("document serializes");
    target.write(&text)
}
