use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA: &str = "report/v1";

/// The JSON emitted by every command. Keys are sorted; nothing in it depends on the
/// clock unless timing was requested.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    /// Non-file arguments that affect the result.
    pub params: BTreeMap<String, Value>,
    /// SHA-256 of each input document, by role.
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 over command, params and inputs; equal digests mean a replayable run.
    pub digest: String,
    pub verdicts: BTreeMap<String, bool>,
    pub passed: bool,
    pub certificates: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects inputs, parameters and findings while a command runs.
#[derive(Debug, Default)]
pub struct Recorder {
    pub params: BTreeMap<String, Value>,
    pub inputs: BTreeMap<String, String>,
    pub verdicts: BTreeMap<String, bool>,
    pub certificates: BTreeMap<String, Value>,
}

impl Recorder {
    pub fn param(&mut self, key: &str, v: impl Serialize) {
        self.params.insert(key.into(), serde_json::to_value(v).expect("parameters serialize"));
    }

    pub fn input(&mut self, role: &str, text: &str) {
        self.inputs.insert(role.into(), sha256_hex(text.as_bytes()));
    }

    pub fn verdict(&mut self, key: &str, v: bool) {
        self.verdicts.insert(key.into(), v);
    }

    pub fn cert(&mut self, key: &str, v: impl Serialize) {
        self.certificates.insert(key.into(), serde_json::to_value(v).expect("certificates serialize"));
    }

    pub fn finish(self, command: String, passed: bool, timing_ms: Option<u64>) -> RunReport {
        let keyed = serde_json::json!({"command": command, "params": self.params, "inputs": self.inputs});
        let digest = sha256_hex(keyed.to_string().as_bytes());
        RunReport {
            schema: REPORT_SCHEMA,
            command,
            params: self.params,
            inputs: self.inputs,
            digest,
            verdicts: self.verdicts,
            passed,
            certificates: Value::Object(self.certificates.into_iter().collect()),
            timing_ms,
        }
    }
}
