mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{schema_errors, without_timestamp, SMALL_CONFIG};

fn rashomon(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rashomon"))
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .args(args)
        .output()
        .expect("binary runs")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), SMALL_CONFIG).unwrap();
    dir
}

#[test]
fn run_writes_the_report_files() {
    let dir = setup();
    let out = rashomon(dir.path(), &["run", "--config", "run.toml", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["report.json", "fer.csv", "attributions.csv", "trajectories.csv"] {
        assert!(dir.path().join("o").join(name).exists(), "{name}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/report.json")).unwrap()).unwrap();
    assert!(schema_errors(&report).is_empty());
}

#[test]
fn config_errors_exit_with_one() {
    let dir = setup();
    for args in [
        &["run", "--config", "run.toml", "--epsilon", "-0.1"][..],
        &["run", "--config", "run.toml", "--loss", "hinge"][..],
        &["run", "--config", "run.toml", "--order", "3"][..],
        &["run", "--bogus"][..],
        &["run", "--config", "missing.toml"][..],
    ] {
        let out = rashomon(dir.path(), args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    std::fs::write(dir.path().join("bad.toml"), "[rashomon]\nepsilonn = 0.1\n").unwrap();
    let out = rashomon(dir.path(), &["run", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilonn"));
}

#[test]
fn runtime_errors_exit_with_two_and_write_nothing() {
    let dir = setup();
    std::fs::write(
        dir.path().join("csv.toml"),
        "[data]\nsource = \"csv\"\npath = \"nope.csv\"\ntargets = [\"y\"]\n[reference]\nkind = \"train-linear\"\n",
    )
    .unwrap();
    let out = rashomon(dir.path(), &["run", "--config", "csv.toml", "--out", "o"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("data stage"));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn staged_commands_reproduce_the_single_run() {
    let dir = setup();
    let base = ["--config", "run.toml", "--out", "o"];
    for cmd in ["synth", "train", "sample", "attribute", "report"] {
        let mut args = vec![cmd];
        args.extend(base);
        let out = rashomon(dir.path(), &args);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["data.csv", "model.json", "samples.json", "spaces.json", "report.json"] {
        assert!(dir.path().join("o").join(name).exists(), "{name}");
    }
    let staged = std::fs::read_to_string(dir.path().join("o/report.json")).unwrap();
    let out = rashomon(dir.path(), &["run", "--config", "run.toml", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let single = std::fs::read_to_string(dir.path().join("o/report.json")).unwrap();
    assert_eq!(without_timestamp(&staged), without_timestamp(&single));
}

#[test]
fn sample_accepts_a_saved_reference() {
    let dir = setup();
    let out = rashomon(dir.path(), &["train", "--config", "run.toml", "--out", "m"]);
    assert_eq!(out.status.code(), Some(0));
    let out = rashomon(
        dir.path(),
        &["sample", "--config", "run.toml", "--out", "s", "--model", "m/model.json", "--epsilon", "0.1"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let samples: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s/samples.json")).unwrap()).unwrap();
    assert_eq!(samples["config"]["reference"]["kind"], "load-bundle");
}

#[test]
fn flags_reach_the_report() {
    let dir = setup();
    let out = rashomon(
        dir.path(),
        &["run", "--config", "run.toml", "--out", "o", "--epsilon", "0.02", "--levels", "2", "--order", "1", "--seed", "4", "--max-models", "3"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/report.json")).unwrap()).unwrap();
    let config = &report["config"];
    assert_eq!(config["rashomon"]["epsilons"], serde_json::json!([0.02]));
    assert_eq!(config["sampler"]["levels"], 2);
    assert_eq!(config["attribution"]["order"], 1);
    assert_eq!(config["sampler"]["seed"], 4);
    for m in report["methods"].as_array().unwrap() {
        assert!(m["n_members"].as_u64().unwrap() <= 3);
    }
    let subsets = report["attribution_spaces"]["grs@0.02"]["subsets"].as_object().unwrap();
    assert_eq!(subsets.len(), 3);
}
