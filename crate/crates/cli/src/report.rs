use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Result of `run` or `selftest`. Everything except `timings` and `wall_clock_seconds` is a
/// deterministic function of the config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: Value,
    pub results: Value,
    pub artifacts: Vec<String>,
    pub timings: BTreeMap<String, f64>,
    pub wall_clock_seconds: f64,
}

#[derive(Serialize)]
struct Payload<'a> {
    schema_version: u32,
    config: &'a Value,
    results: &'a Value,
    artifacts: &'a [String],
}

impl RunReport {
    pub fn new(config: Value, results: Value) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            config,
            results,
            artifacts: Vec::new(),
            timings: BTreeMap::new(),
            wall_clock_seconds: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// The report without wall-clock fields; byte-identical across reruns.
    pub fn payload_json(&self) -> String {
        let p = Payload {
            schema_version: self.schema_version,
            config: &self.config,
            results: &self.results,
            artifacts: &self.artifacts,
        };
        serde_json::to_string_pretty(&p).expect("reports serialize") + "\n"
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}
