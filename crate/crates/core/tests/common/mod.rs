#![allow(dead_code)]

use serde_json::Value;

pub const SCHEMA: &str = include_str!("../../schema/report.schema.json");

pub fn schema_errors(report: &Value) -> Vec<String> {
    let schema: Value = serde_json::from_str(SCHEMA).expect("schema parses");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path)).collect()
}

/// Report text with the timestamp line removed.
pub fn without_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

/// A small linear-reference run that finishes in well under a second.
pub const SMALL_CONFIG: &str = r#"
[data]
n = 200
[reference]
kind = "train-linear"
[rashomon]
epsilon = [0.05, 0.1]
[sampler]
levels = 3
[attribution]
repeats = 8
[baselines]
methods = ["random-input"]
candidates = 12
"#;
