mod common;

use common::{schema_errors, without_timestamp, SMALL_CONFIG};
use rashomon::config::{validate_config, RunConfig};
use rashomon::pipeline::{emit_report, load_report, run_in_memory, run_pipeline, REPORT_FILES};
use serde_json::Value;

fn config_in(dir: &std::path::Path, text: &str) -> RunConfig {
    let mut c = validate_config(text).unwrap();
    c.output.dir = dir.to_path_buf();
    c
}

#[test]
fn emitted_report_matches_the_shipped_schema() {
    let dir = tempfile::tempdir().unwrap();
    let config = config_in(dir.path(), SMALL_CONFIG);
    run_pipeline(&config).unwrap();
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    let errors = schema_errors(&value);
    assert!(errors.is_empty(), "{errors:#?}");
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    for key in ["version", "config", "reference", "methods", "attribution_spaces", "metrics", "timestamp"] {
        assert!(keys.contains(&key), "missing {key}");
    }
}

#[test]
fn schema_rejects_a_broken_report() {
    let report = run_in_memory(&validate_config(SMALL_CONFIG).unwrap()).unwrap();
    let mut value = serde_json::to_value(&report).unwrap();
    value["metrics"][0]["ser"] = Value::from(1.5);
    assert!(!schema_errors(&value).is_empty());
    let mut value = serde_json::to_value(&report).unwrap();
    value.as_object_mut().unwrap().remove("timestamp");
    assert!(!schema_errors(&value).is_empty());
}

#[test]
fn identical_configs_give_identical_reports() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let text = SMALL_CONFIG.replace("[data]", "[output]\ndir = \"same\"\n[data]");
    for dir in [a.path(), b.path()] {
        let report = run_in_memory(&validate_config(&text).unwrap()).unwrap();
        emit_report(&report, dir).unwrap();
    }
    for name in REPORT_FILES {
        let x = std::fs::read_to_string(a.path().join(name)).unwrap();
        let y = std::fs::read_to_string(b.path().join(name)).unwrap();
        assert_eq!(without_timestamp(&x), without_timestamp(&y), "{name} differs");
    }
}

#[test]
fn fer_csv_rows_are_methods_times_tolerances_times_orders() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(&config_in(dir.path(), SMALL_CONFIG)).unwrap();
    let fer = std::fs::read_to_string(dir.path().join("fer.csv")).unwrap();
    let mut lines = fer.lines();
    assert_eq!(lines.next().unwrap(), "method,epsilon,order,fer,ser,n_members");
    assert_eq!(lines.count(), 2 * 2 * 2);
    let attributions = std::fs::read_to_string(dir.path().join("attributions.csv")).unwrap();
    assert_eq!(attributions.lines().next().unwrap(), "method,epsilon,model_id,subset,score");
    let trajectories = std::fs::read_to_string(dir.path().join("trajectories.csv")).unwrap();
    assert_eq!(trajectories.lines().next().unwrap(), "direction,sign,level,epsilon,lambda,loss");
}

#[test]
fn without_baselines_only_grs_rows_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL_CONFIG.replace("methods = [\"random-input\"]", "methods = []");
    run_pipeline(&config_in(dir.path(), &text)).unwrap();
    for name in ["fer.csv", "attributions.csv"] {
        let body = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(body.lines().skip(1).all(|l| l.starts_with("grs,")), "{name}");
    }
}

#[test]
fn reloaded_report_passes_the_membership_recheck() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(&config_in(dir.path(), SMALL_CONFIG)).unwrap();
    let path = dir.path().join("report.json");
    let report = load_report(&path).unwrap();
    assert!(report.methods.iter().all(|m| m.members.iter().all(|r| r.loss <= m.boundary_loss)));

    let mut value: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let bound = value["methods"][0]["boundary_loss"].as_f64().unwrap();
    value["methods"][0]["members"][1]["loss"] = Value::from(bound * 2.0);
    std::fs::write(&path, serde_json::to_string(&value).unwrap()).unwrap();
    assert!(load_report(&path).is_err());
}

#[test]
fn failed_run_leaves_no_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let text = r#"
[data]
source = "csv"
path = "/nonexistent/input.csv"
targets = ["y"]
[reference]
kind = "train-linear"
"#;
    let err = run_pipeline(&config_in(&out, text)).unwrap_err();
    assert!(err.to_string().contains("data stage"), "{err}");
    assert!(!out.exists());
}

#[test]
fn zero_tolerance_report_has_a_single_member_and_no_range() {
    let text = "[data]\nn = 100\n[reference]\nkind = \"quadratic-oracle\"\n[rashomon]\nepsilon = 0.0\n[attribution]\nrepeats = 5\n";
    let report = run_in_memory(&validate_config(text).unwrap()).unwrap();
    assert_eq!(report.methods[0].n_members, 1);
    assert_eq!(report.methods[0].members[0].id, "ref");
    let space = &report.attribution_spaces["grs@0"];
    assert!(space.subsets.values().all(|s| s.width() == 0.0));
    assert_eq!(report.metrics[0].metrics.fer_first_order, 0.0);
    assert_eq!(report.metrics[0].metrics.fer_second_order, 0.0);
}
