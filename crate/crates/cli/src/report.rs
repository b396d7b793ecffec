use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use fixcalc_core::algebra::format_rational;
use fixcalc_core::FixedCluster;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct InputFile {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterRow {
    pub simplices: Vec<String>,
    pub localized_index: String,
    pub witness: BTreeMap<String, String>,
}

impl ClusterRow {
    pub fn from_cluster(c: &FixedCluster) -> Self {
        ClusterRow {
            simplices: c.simplices.iter().map(|s| s.simplex.to_string()).collect(),
            localized_index: c.localized_index.to_string(),
            witness: c
                .witness
                .iter()
                .map(|(v, w)| (v.to_string(), format_rational(w)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

/// Everything a run computed. Numbers are exact strings; timing is kept
/// out of the machine form so identical inputs give identical JSON.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<InputFile>,
    pub digest: String,
    pub results: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub clusters: Vec<ClusterRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Failure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl RunReport {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        RunReport {
            schema: SCHEMA,
            command: command.to_string(),
            args,
            inputs: Vec::new(),
            digest: hex(&Sha256::digest(b"")),
            results: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            clusters: Vec::new(),
            error: None,
            elapsed: Duration::ZERO,
        }
    }

    /// Records an input and folds it into the combined digest.
    pub fn add_input(&mut self, role: &str, path: &str, contents: &[u8]) {
        self.inputs.push(InputFile {
            role: role.to_string(),
            path: path.to_string(),
            sha256: hex(&Sha256::digest(contents)),
        });
        let mut h = Sha256::new();
        for input in &self.inputs {
            h.update(input.role.as_bytes());
            h.update([0]);
            h.update(input.sha256.as_bytes());
            h.update([0]);
        }
        self.digest = hex(&h.finalize());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn verdict(&mut self, key: &str, value: impl Into<String>) {
        self.verdicts.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fixcalc {}", self.args.join(" "));
        let _ = writeln!(out, "inputs digest  {}", self.digest);
        for (k, v) in &self.results {
            let _ = writeln!(out, "{k:<20} {}", render(v));
        }
        for (k, v) in &self.verdicts {
            let _ = writeln!(out, "{k:<20} {v}");
        }
        if !self.clusters.is_empty() {
            let _ = writeln!(out, "clusters");
            for c in &self.clusters {
                let witness: Vec<String> = c.witness.iter().map(|(v, w)| format!("{v}:{w}")).collect();
                let _ = writeln!(
                    out,
                    "  index {:>3}  {}  witness {}",
                    c.localized_index,
                    c.simplices.join(" "),
                    witness.join(" ")
                );
            }
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {}", e.message);
        }
        let _ = writeln!(out, "time {:.3?}", self.elapsed);
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(render).collect::<Vec<_>>().join(", "),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", render(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}
