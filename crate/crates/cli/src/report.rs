use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Machine-readable outcome of one invocation.
///
/// Serialized as JSON with every object's keys sorted, so two runs with the
/// same inputs produce identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: Vec<String>,
    /// SHA-256 of the canonical effective parameters and input file bytes.
    pub inputs_digest: String,
    pub results: serde_json::Value,
    pub tolerances: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.flags.values().all(|&f| f)
    }

    pub fn to_text(&self) -> String {
        // Value's map is a BTreeMap, so this sorts struct fields too
        let value = serde_json::to_value(self).expect("report is representable");
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("report: {e}")))
    }
}

pub fn digest(parameters: &serde_json::Value, files: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_string(parameters).expect("parameters serialize").as_bytes());
    for f in files {
        h.update((f.len() as u64).to_le_bytes());
        h.update(f);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
