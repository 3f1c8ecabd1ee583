use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{Failure, Outcome};

/// The `--json` report. Key order is fixed, so two runs with the same seed
/// and `--no-timestamp` print identical bytes.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub seed: u64,
    pub results: Value,
    pub delta_log: Value,
    pub degree: Option<usize>,
    pub exit_code: u8,
    /// Seconds since the Unix epoch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, seed: u64, result: &Result<Outcome, Failure>, stamp: bool) -> Self {
        let (results, delta_log, degree, exit_code) = match result {
            Ok(o) => (o.results.clone(), o.delta_log.clone(), o.degree, o.exit_code),
            Err(f) => (json!({ "error": f.to_string() }), json!([]), None, f.exit_code()),
        };
        let timestamp = stamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        Report { command: command.to_string(), inputs, seed, results, delta_log, degree, exit_code, timestamp }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}
